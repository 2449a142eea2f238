// Copyright 2026 The qgnn-d2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qd2d {

/// Dense simulation refuses registers larger than this.
inline constexpr int kMaxQubits = 20;

enum class GateKind { RX, RY, RZ, CNOT, CZ, H };

bool is_rotation(GateKind kind);

struct Gate {
    GateKind kind;
    /// Single target for RX/RY/RZ/H; (control, target) for CNOT; any order for CZ.
    std::vector<int> targets;
    std::optional<int> angle_slot;
};

enum class SlotRole { Input, Trainable };

/// An ordered gate list over n qubits whose rotation angles are read from a
/// flat angle vector by slot index.
class CircuitSpec {
  public:
    explicit CircuitSpec(int n_qubits);

    int n_qubits() const { return n_; }
    int angle_slots() const { return static_cast<int>(slot_roles_.size()); }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::vector<SlotRole> &slot_roles() const { return slot_roles_; }
    std::vector<int> slots_with_role(SlotRole role) const;

    int add_slot(SlotRole role);
    void rx(int q, int slot) { add({GateKind::RX, {q}, slot}); }
    void ry(int q, int slot) { add({GateKind::RY, {q}, slot}); }
    void rz(int q, int slot) { add({GateKind::RZ, {q}, slot}); }
    void h(int q) { add({GateKind::H, {q}, std::nullopt}); }
    void cnot(int control, int target) { add({GateKind::CNOT, {control, target}, std::nullopt}); }
    void cz(int a, int b) { add({GateKind::CZ, {a, b}, std::nullopt}); }

    /// Validates and appends. Throws CircuitError.
    void add(Gate gate);

  private:
    int n_;
    std::vector<Gate> gates_;
    std::vector<SlotRole> slot_roles_;
};

/// Little-endian: qubit q is bit q of the amplitude index.
class StateVector {
  public:
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_; }
    std::span<const std::complex<double>> amps() const { return amps_; }
    std::span<std::complex<double>> amps() { return amps_; }
    double norm2() const;

    /// Row-major 2x2 matrix {m00, m01, m10, m11}.
    void apply_1q(int q, const std::array<std::complex<double>, 4> &m);
    void apply_rotation(GateKind kind, int q, double theta);
    void apply_cnot(int control, int target);
    void apply_cz(int a, int b);
    void apply(const Gate &gate, double theta);

  private:
    int n_;
    std::vector<std::complex<double>> amps_;
};

struct ZTerm {
    double coeff = 1.0;
    std::vector<int> support;
};

/// Real linear combination of Pauli-Z strings.
struct Observable {
    std::vector<ZTerm> terms;

    static Observable z(int q, double coeff = 1.0) { return {{{coeff, {q}}}}; }
    Observable &add(double coeff, std::vector<int> support) {
        terms.push_back({coeff, std::move(support)});
        return *this;
    }
};

StateVector run_circuit(const CircuitSpec &spec, std::span<const double> angles);

double expectation(const StateVector &state, const Observable &obs);

/// <Z_q> for every q in qubits, computed in one pass over the state.
std::vector<double> z_expectations(const StateVector &state, std::span<const int> qubits);

/// Parameter-shift derivative of <obs> with respect to each requested slot.
/// A slot that drives several gates gets the sum of per-gate shift terms.
std::vector<double> param_shift_grad(const CircuitSpec &spec, std::span<const double> angles,
                                     const Observable &obs, std::span<const int> slots);

}  // namespace qd2d
