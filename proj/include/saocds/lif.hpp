#ifndef SAOCDS_LIF_HPP
#define SAOCDS_LIF_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "saocds/fixed_point.hpp"

namespace saocds {

struct NeuronParams {
    FixedPoint16 alpha;  // decay factor in [0, 1]
    FixedPoint16 theta;  // soft-reset amount, >= 0
    FixedPoint16 u_th0;  // firing threshold

    void validate(int frac_bits) const;

    friend constexpr bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

struct NeuronState {
    Accumulator v;
    bool s_prev = false;

    friend constexpr bool operator==(const NeuronState&, const NeuronState&) = default;
};

/// Start of a timestep: v <- alpha * v - theta * s_prev. The weighted input
/// is accumulated into v by the engine afterwards.
constexpr NeuronState lif_begin_timestep(NeuronState s, const NeuronParams& p, int frac_bits,
                                         ArithEvents* ev = nullptr) {
    Accumulator v = mul_round(p.alpha, s.v, frac_bits, ev);
    if (s.s_prev) v = sat_sub(v, p.theta.raw, ev);
    return NeuronState{v, s.s_prev};
}

struct FireResult {
    bool spike = false;
    NeuronState state;
};

/// Strict threshold: v == u_th0 does not fire. v is left as is; the soft
/// reset happens through s_prev at the next timestep.
constexpr FireResult lif_fire(NeuronState s, const NeuronParams& p) {
    const bool spike = s.v.raw > std::int32_t{p.u_th0.raw};
    return FireResult{spike, NeuronState{s.v, spike}};
}

/// Per-layer neuron parameters with optional per-neuron overrides.
struct LayerNeuronParams {
    NeuronParams defaults;
    std::vector<FixedPoint16> alpha;
    std::vector<FixedPoint16> theta;
    std::vector<FixedPoint16> u_th0;

    NeuronParams at(std::size_t neuron) const {
        NeuronParams p = defaults;
        if (!alpha.empty()) p.alpha = alpha[neuron];
        if (!theta.empty()) p.theta = theta[neuron];
        if (!u_th0.empty()) p.u_th0 = u_th0[neuron];
        return p;
    }
    bool has_overrides() const { return !alpha.empty() || !theta.empty() || !u_th0.empty(); }

    void validate(std::size_t neurons, int frac_bits) const;

    friend bool operator==(const LayerNeuronParams&, const LayerNeuronParams&) = default;
};

/// Membrane state of one layer, [row][col]: [oc][oi] for conv, [0][n] for FC.
class PotentialBank {
public:
    PotentialBank() = default;
    PotentialBank(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), states_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return states_.size(); }

    std::span<NeuronState> row(std::size_t r) { return std::span<NeuronState>(states_).subspan(r * cols_, cols_); }
    std::span<const NeuronState> row(std::size_t r) const {
        return std::span<const NeuronState>(states_).subspan(r * cols_, cols_);
    }
    std::span<const NeuronState> states() const { return states_; }
    NeuronState& operator[](std::size_t i) { return states_[i]; }
    const NeuronState& operator[](std::size_t i) const { return states_[i]; }

    void reset() { std::fill(states_.begin(), states_.end(), NeuronState{}); }

    friend bool operator==(const PotentialBank&, const PotentialBank&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<NeuronState> states_;
};

} // namespace saocds

#endif
