#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ucl/qmath.hpp"

namespace ucl {

// The four optimization regimes of the channel family.
enum class Case { DetSym, DetAsym, ProbSym, ProbAsym };

std::string to_string(Case c);
Case case_from_string(const std::string& s);
bool is_deterministic(Case c);
bool is_symmetric(Case c);

// Channel in the state picture: a positive operator on R (x) S_1 ... S_M,
// R most significant, every local dimension d. The trace is the average
// success probability, so 0 < Tr <= 1 for a trace-decreasing channel.
struct ChoiState {
    int d = 0;
    int M = 0;
    Matrix matrix;

    std::vector<int> local_dims() const { return std::vector<int>(M + 1, d); }
    // Throws unless the matrix has dimension d^(M+1), is PSD within -1e-10
    // and has trace in (0, 1 + 1e-10].
    void validate() const;
};

// Channel in the procedure picture: a two-valued measurement with success
// element filter^dag filter, the filtered state placed on slot k and fixed
// pure states on the remaining slots.
struct FilterChannel {
    int d = 0;
    int M = 0;
    int k = 1;                        // favored slot, 1-based
    Matrix filter;                    // d x d, filter^dag filter <= I
    std::vector<PureState> attached;  // M-1 states for slots l != k, ascending l

    void validate() const;
};

// Joint conditional output on S_1 ... S_M. When the success probability is
// below 1e-12 the state is meaningless and `defined` is false; Monte Carlo
// loops skip such samples instead of aborting.
struct ChannelOutput {
    double probability = 0.0;
    Matrix state;
    bool defined = false;
};

using Channel = std::variant<FilterChannel, ChoiState>;

// Output of the channel encoded by `a` for input psi: the unnormalized joint
// state is d <psi*_R| A |psi*_R>, conjugation taken in the computational
// basis fixed by max_entangled_projector.
ChannelOutput apply_choi(const ChoiState& a, const PureState& psi);

// Success probability Tr[filter^dag filter |psi><psi|]; on success the joint
// output is the normalized filtered state on slot k and the attached states
// elsewhere.
ChannelOutput apply_filter(const FilterChannel& ch, const PureState& psi);

ChannelOutput apply_channel(const Channel& ch, const PureState& psi);

// State isomorphic to the filter procedure. Tr equals Tr[filter^dag filter]/d.
ChoiState choi_of_filter(const FilterChannel& ch);
ChoiState choi_of(const Channel& ch);

// The four optimal constructions. Probabilistic cases come back as filter
// procedures, deterministic ones directly as Choi states.
Channel build_optimal_channel(Case c, int d, int M, int k = 1);

// Partial trace of the Choi state keeping R and output i (1-based).
Matrix reduced_choi(const ChoiState& a, int i);

// Measure in the computational basis, prepare |i...i> on the outcome. The
// outputs are classically correlated, which makes this the standard negative
// example for output-decorrelation checks.
ChoiState measurement_based_cloner(int d, int M);

int local_dim(const Channel& ch);
int output_count(const Channel& ch);

}  // namespace ucl
