#include "sgl/grid.hpp"

#include <cmath>

namespace sgl {

Grid::Grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
           std::array<std::size_t, 2> n, Bc bc)
    : dim_(dim), lo_(lo), hi_(hi), n_(n), bc_(bc) {
    if (dim != 1 && dim != 2) throw BadParameter("grid dimension must be 1 or 2");
    if (dim == 1) {
        n_[1] = 1;
        lo_[1] = hi_[1] = 0.0;
    }
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) {
        if (n_[k] < 3) throw BadParameter("grid needs at least 3 nodes per axis");
        if (!(hi_[k] > lo_[k])) throw BadParameter("grid extent must have positive length");
        total *= n_[k];
    }
    if (total > kNodeCap) throw BadParameter("grid exceeds the node cap");
    h_[0] = (hi_[0] - lo_[0]) / double(n_[0] - 1);
    h_[1] = dim == 2 ? (hi_[1] - lo_[1]) / double(n_[1] - 1) : 0.0;
}

bool Grid::same_as(const Grid& o) const {
    if (dim_ != o.dim_ || bc_ != o.bc_) return false;
    for (int k = 0; k < dim_; ++k)
        if (n_[k] != o.n_[k] || lo_[k] != o.lo_[k] || hi_[k] != o.hi_[k]) return false;
    return true;
}

GridFunction::GridFunction(const Grid& grid, std::vector<cplx> values)
    : grid_(&grid), values_(std::move(values)) {
    if (values_.size() != grid.num_nodes())
        throw InvalidField("grid function size does not match node count");
}

void GridFunction::check_finite(const char* what) const {
    for (const cplx& z : values_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidField(std::string(what) + " has a non-finite entry");
}

} // namespace sgl
