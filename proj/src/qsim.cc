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

#include "qd2d/qsim.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qd2d/errors.h"

namespace qd2d {

using cplx = std::complex<double>;

bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

CircuitSpec::CircuitSpec(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CircuitError("circuit needs 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                           std::to_string(n_qubits));
    }
}

std::vector<int> CircuitSpec::slots_with_role(SlotRole role) const {
    std::vector<int> out;
    for (int s = 0; s < angle_slots(); ++s) {
        if (slot_roles_[s] == role) {
            out.push_back(s);
        }
    }
    return out;
}

int CircuitSpec::add_slot(SlotRole role) {
    slot_roles_.push_back(role);
    return angle_slots() - 1;
}

void CircuitSpec::add(Gate gate) {
    for (std::size_t i = 0; i < gate.targets.size(); ++i) {
        const int q = gate.targets[i];
        if (q < 0 || q >= n_) {
            throw CircuitError("gate target " + std::to_string(q) + " outside register of " +
                               std::to_string(n_) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gate.targets[j] == q) {
                throw CircuitError("gate targets must be distinct");
            }
        }
    }
    const bool two_qubit = gate.kind == GateKind::CNOT || gate.kind == GateKind::CZ;
    if (gate.targets.size() != (two_qubit ? 2u : 1u)) {
        throw CircuitError("wrong number of targets for gate");
    }
    if (is_rotation(gate.kind)) {
        if (!gate.angle_slot || *gate.angle_slot < 0 || *gate.angle_slot >= angle_slots()) {
            throw CircuitError("rotation gate needs an existing angle slot");
        }
    } else if (gate.angle_slot) {
        throw CircuitError("only rotation gates take an angle slot");
    }
    gates_.push_back(std::move(gate));
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CircuitError("state needs 1.." + std::to_string(kMaxQubits) + " qubits");
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

double StateVector::norm2() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

void StateVector::apply_1q(int q, const std::array<cplx, 4> &m) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t size = amps_.size();
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps_[i];
            const cplx a1 = amps_[i + stride];
            amps_[i] = m[0] * a0 + m[1] * a1;
            amps_[i + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply_rotation(GateKind kind, int q, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    switch (kind) {
        case GateKind::RX:
            apply_1q(q, {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}});
            break;
        case GateKind::RY:
            apply_1q(q, {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}});
            break;
        case GateKind::RZ: {
            const std::size_t mask = std::size_t{1} << q;
            const cplx lo{c, -s};
            const cplx hi{c, s};
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                amps_[i] *= (i & mask) ? hi : lo;
            }
            break;
        }
        default:
            throw CircuitError("not a rotation gate");
    }
}

void StateVector::apply_cnot(int control, int target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amps_[i], amps_[i | tmask]);
        }
    }
}

void StateVector::apply_cz(int a, int b) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == mask) {
            amps_[i] = -amps_[i];
        }
    }
}

void StateVector::apply(const Gate &gate, double theta) {
    switch (gate.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            apply_rotation(gate.kind, gate.targets[0], theta);
            break;
        case GateKind::H: {
            const double r = std::numbers::sqrt2 / 2;
            apply_1q(gate.targets[0], {cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}});
            break;
        }
        case GateKind::CNOT:
            apply_cnot(gate.targets[0], gate.targets[1]);
            break;
        case GateKind::CZ:
            apply_cz(gate.targets[0], gate.targets[1]);
            break;
    }
}

namespace {

void check_angles(const CircuitSpec &spec, std::span<const double> angles) {
    if (angles.size() != static_cast<std::size_t>(spec.angle_slots())) {
        throw CircuitError("circuit has " + std::to_string(spec.angle_slots()) + " angle slots, got " +
                           std::to_string(angles.size()) + " angles");
    }
}

// Runs the circuit with gate `shifted_gate` (if any) offset by `delta`.
StateVector run_shifted(const CircuitSpec &spec, std::span<const double> angles, std::size_t shifted_gate,
                        double delta) {
    StateVector state(spec.n_qubits());
    const auto &gates = spec.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        double theta = gates[g].angle_slot ? angles[*gates[g].angle_slot] : 0.0;
        if (g == shifted_gate) {
            theta += delta;
        }
        state.apply(gates[g], theta);
    }
    return state;
}

std::size_t support_mask(const ZTerm &term, int n) {
    std::size_t mask = 0;
    for (int q : term.support) {
        if (q < 0 || q >= n) {
            throw CircuitError("observable support qubit " + std::to_string(q) + " out of range");
        }
        mask ^= std::size_t{1} << q;
    }
    return mask;
}

}  // namespace

StateVector run_circuit(const CircuitSpec &spec, std::span<const double> angles) {
    check_angles(spec, angles);
    return run_shifted(spec, angles, spec.gates().size(), 0.0);
}

double expectation(const StateVector &state, const Observable &obs) {
    const auto amps = state.amps();
    double total = 0.0;
    for (const auto &term : obs.terms) {
        const std::size_t mask = support_mask(term, state.n_qubits());
        double acc = 0.0;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const double p = std::norm(amps[i]);
            acc += (std::popcount(i & mask) & 1) ? -p : p;
        }
        total += term.coeff * acc;
    }
    return total;
}

std::vector<double> z_expectations(const StateVector &state, std::span<const int> qubits) {
    const auto amps = state.amps();
    std::vector<double> out(qubits.size(), 0.0);
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        if (qubits[j] < 0 || qubits[j] >= state.n_qubits()) {
            throw CircuitError("measured qubit out of range");
        }
    }
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            out[j] += ((i >> qubits[j]) & 1) ? -p : p;
        }
    }
    return out;
}

std::vector<double> param_shift_grad(const CircuitSpec &spec, std::span<const double> angles,
                                     const Observable &obs, std::span<const int> slots) {
    check_angles(spec, angles);
    const auto &gates = spec.gates();
    std::vector<double> grad(slots.size(), 0.0);
    constexpr double shift = std::numbers::pi / 2;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        const int slot = slots[j];
        if (slot < 0 || slot >= spec.angle_slots()) {
            throw CircuitError("slot " + std::to_string(slot) + " does not exist");
        }
        bool used = false;
        for (std::size_t g = 0; g < gates.size(); ++g) {
            if (gates[g].angle_slot != slot) {
                continue;
            }
            used = true;
            const double plus = expectation(run_shifted(spec, angles, g, shift), obs);
            const double minus = expectation(run_shifted(spec, angles, g, -shift), obs);
            grad[j] += 0.5 * (plus - minus);
        }
        if (!used) {
            throw CircuitError("slot " + std::to_string(slot) + " drives no rotation gate");
        }
    }
    return grad;
}

}  // namespace qd2d
