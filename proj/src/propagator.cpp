#include "cone/propagator.hpp"

#include "cone/error.hpp"

#include <cmath>

namespace cone {

SpectralField distorted_fourier(const ModeField& field, GridPtr spectral, const TransformOptions& options) {
    field.validate();
    if (!spectral) spectral = field.grid();
    SpectralField out(field.table(), spectral);
    const auto& table = *field.table();
    for (std::size_t s : field.active_slots()) {
        const double nu = table[table.entry_of_slot(s)].nu;
        const auto b = hankel_transform(nu, field.mode(s), *field.grid(), *spectral, options);
        std::copy(b.begin(), b.end(), out.mode(s).begin());
    }
    return out;
}

ModeField evolve(const SpectralField& spec, double t, GridPtr physical) {
    spec.validate();
    if (!std::isfinite(t)) throw DomainError("evolve: time must be finite");
    if (!physical) physical = spec.grid();
    const auto& grid = *spec.grid();
    ModeField out(spec.table(), physical);
    const auto& table = *spec.table();
    std::vector<cplx> phase(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) phase[j] = std::polar(1.0, t * grid.node(j) * grid.node(j));
    std::vector<cplx> tmp(grid.size());
    for (std::size_t s : spec.active_slots()) {
        const double nu = table[table.entry_of_slot(s)].nu;
        auto b = spec.mode(s);
        for (std::size_t j = 0; j < grid.size(); ++j) tmp[j] = phase[j] * b[j];
        const auto v = hankel_transform(nu, tmp, grid, *physical);
        std::copy(v.begin(), v.end(), out.mode(s).begin());
    }
    return out;
}

SpectralField frequency_localize(const SpectralField& spec, double N, BumpVariant variant) {
    if (!(N > 0) || !std::isfinite(N)) throw DomainError("frequency_localize: N must be positive");
    SpectralField out = spec;
    const auto& grid = *spec.grid();
    std::vector<double> cut(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) cut[j] = bump(grid.node(j) / N, variant);
    for (std::size_t s = 0; s < out.slots(); ++s) {
        auto m = out.mode(s);
        for (std::size_t j = 0; j < m.size(); ++j) m[j] *= cut[j];
    }
    return out;
}

EvolvedField sample_solution(const SpectralField& spec, std::span<const double> times, GridPtr physical) {
    EvolvedField out;
    for (double t : times) {
        out.times.push_back(t);
        out.fields.push_back(evolve(spec, t, physical));
        out.masses.push_back(mass(out.fields.back()));
    }
    return out;
}

double mass(const FieldData& field) { return field.l2_norm(); }

}  // namespace cone
