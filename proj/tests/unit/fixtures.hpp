#pragma once

#include "nctheta/complex_structure.hpp"
#include "nctheta/lattice_embedding.hpp"

namespace fixtures {

inline nctheta::EmbeddingParams lattice_params() {
    nctheta::EmbeddingParams p;
    p.kind = nctheta::EmbeddingKind::Lattice;
    p.theta1 = 0.5;
    p.m = Eigen::Matrix2i::Identity();
    p.delta_hat << 0.0, 0.7, 0.3, 0.0;
    return p;
}

inline nctheta::EmbeddingParams vector_params() {
    nctheta::EmbeddingParams p;
    p.kind = nctheta::EmbeddingKind::VectorSpace;
    p.theta1 = 0.5;
    p.theta2 = 0.4;
    return p;
}

inline nctheta::EmbeddingMap lattice() { return nctheta::build_embedding(lattice_params()); }
inline nctheta::EmbeddingMap vector() { return nctheta::build_embedding(vector_params()); }

inline Eigen::Matrix2cd lattice_tau() {
    Eigen::Matrix2cd t = Eigen::Matrix2cd::Zero();
    t(0, 0) = {0.0, 1.0};
    return t;
}

inline Eigen::Matrix2cd vector_tau() {
    Eigen::Matrix2cd t = Eigen::Matrix2cd::Zero();
    t(0, 0) = {0.0, 0.5};
    t(1, 1) = {0.0, 0.4};
    return t;
}

inline nctheta::ComplexStructure lattice_structure() {
    return nctheta::make_complex_structure(lattice(), lattice_tau());
}
inline nctheta::ComplexStructure vector_structure() {
    return nctheta::make_complex_structure(vector(), vector_tau());
}

// mpmath at 30 digits
inline constexpr double kThetaI = 1.086434811213308014575;
inline constexpr double kTheta5i = 1.000000301403455078;
inline constexpr double kB05_0 = 0.999999698596544922;
inline constexpr double kB0_1 = 7.76406407853550127e-4;
inline constexpr double kB03_0 = 0.999999906861210218;
inline constexpr double kBTilde0 = 1.000000602807001000;
inline constexpr double kCoefficientW2 = 0.455938402608691677;
inline constexpr double kShiftedGaussianIntegral = 0.227969063882998118;
inline constexpr double kInnerProductE3 = 3.88203167769998460e-4;
inline constexpr double kWitnessGap = 1.386271409110889463;
inline constexpr double kExpMinus3Pi = 8.06995175703046e-5;
inline constexpr double kExpMinusPiOver8 = 0.675231906655777217;

}  // namespace fixtures
