#pragma once

#include "cone/grid.hpp"
#include "cone/spectrum.hpp"

#include <complex>
#include <span>
#include <vector>

namespace cone {

using cplx = std::complex<double>;

// Per-mode radial profiles over a grid, stored slot-major: values[slot * size + i].
class FieldData {
public:
    FieldData(TablePtr table, GridPtr grid);

    const TablePtr& table() const { return table_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t slots() const { return table_->slots(); }
    std::size_t nodes() const { return grid_->size(); }

    std::span<cplx> mode(std::size_t slot);
    std::span<const cplx> mode(std::size_t slot) const;
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    // Throws ShapeError or DomainError on inconsistent shape or non-finite values.
    void validate() const;
    // Slots carrying any nonzero value.
    std::vector<std::size_t> active_slots() const;

    // L^2 norm against the grid weights, summed over slots.
    double l2_norm() const;

private:
    TablePtr table_;
    GridPtr grid_;
    std::vector<cplx> values_;
};

// Coefficients a_{nu,l}(r_i) in physical space.
class ModeField : public FieldData {
public:
    using FieldData::FieldData;
    // Mass of the sampled data discarded by mode truncation, if decomposed from samples.
    double discarded_mass = 0.0;
};

// Hankel images b_{nu,l}(rho_j) over a spectral grid.
class SpectralField : public FieldData {
public:
    using FieldData::FieldData;
};

}  // namespace cone
