// config.hpp — Global numeric configuration record

#pragma once

namespace hamdist {

/// All tolerances used across the library. Defaults are the contract values;
/// every check reads the one global record so they can be tightened or
/// relaxed in a single place.
struct NumericConfig {
    double hermitian_tol      = 1e-12;  // entrywise |H - H†|
    double traceless_tol      = 1e-12;  // |tr H|
    double unitary_tol        = 1e-10;  // entrywise |U†U - 1|
    double coords_tol         = 1e-12;  // coordinate round-trip
    double residual_tol       = 1e-8;   // conjugation-decomposition reconstruction
    double prune_tol          = 1e-12;  // drop decomposition coefficients below this
    double plan_tol           = 1e-8;   // end-to-end plan verification identity
    double cluster_tol        = 1e-9;   // eigenvalue clustering (two-valued spectrum)
    double distinct_tol       = 1e-9;   // pairwise-distinct traceless parts
    double sign_pair_tol      = 1e-12;  // exact-negation detection between hypotheses
    double lambda_spread_tol  = 1e-6;   // relative |λ| spread required of a functional draw
    double state_norm_tol     = 1e-10;  // state-vector normalization
};

NumericConfig& numeric_config();

} // namespace hamdist
