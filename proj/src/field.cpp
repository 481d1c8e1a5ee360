#include "cone/field.hpp"

#include "cone/error.hpp"

#include <cmath>

namespace cone {

FieldData::FieldData(TablePtr table, GridPtr grid) : table_(std::move(table)), grid_(std::move(grid)) {
    if (!table_ || !grid_) throw ShapeError("field: null table or grid");
    if (table_->dimension() != grid_->dimension()) throw ShapeError("field: table and grid dimensions differ");
    values_.assign(table_->slots() * grid_->size(), cplx{});
}

std::span<cplx> FieldData::mode(std::size_t slot) {
    return std::span<cplx>(values_).subspan(slot * nodes(), nodes());
}

std::span<const cplx> FieldData::mode(std::size_t slot) const {
    return std::span<const cplx>(values_).subspan(slot * nodes(), nodes());
}

void FieldData::validate() const {
    if (values_.size() != slots() * nodes()) throw ShapeError("field: coefficient array has the wrong shape");
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("field: non-finite coefficient");
}

std::vector<std::size_t> FieldData::active_slots() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < slots(); ++s) {
        for (const auto& v : mode(s)) {
            if (v != cplx{}) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

double FieldData::l2_norm() const {
    const auto& w = grid_->weights();
    double sum = 0;
    for (std::size_t s = 0; s < slots(); ++s) {
        auto m = mode(s);
        for (std::size_t i = 0; i < m.size(); ++i) sum += w[i] * std::norm(m[i]);
    }
    return std::sqrt(sum);
}

}  // namespace cone
