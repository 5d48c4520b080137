#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sgl/grid.hpp"

namespace sgl {

/// Deterministic probe functions for form-bound measurement and property sweeps.
/// All randomized routines take an explicit seed.
class ProbeGen {
public:
    ProbeGen(const Grid& grid, std::uint64_t seed) : grid_(&grid), rng_(seed) {}

    /// BC-compatible tensor modes: sine modes for Dirichlet, cosine modes (including
    /// the constant) for Neumann. Returns up to kmax (1-D) or kmax^2 (2-D) functions.
    std::vector<GridFunction> modes(int kmax);

    /// Random smooth complex combination of BC-compatible modes, sup-norm ~ 1.
    GridFunction random_smooth(int kmax = 6, double decay = 2.0);

    /// Random smooth real-valued, >= 0; vanishes on the boundary for Dirichlet grids.
    GridFunction random_nonneg(int kmax = 6, double decay = 2.0);

    /// exp(g1 + i g2) with random smooth real g1, g2; nowhere vanishing.
    GridFunction random_nonvanishing(int kmax = 6, double decay = 2.0);

private:
    GridFunction random_combination(int kmax, double decay, bool force_dirichlet_zero);
    const Grid* grid_;
    std::mt19937_64 rng_;
};

} // namespace sgl
