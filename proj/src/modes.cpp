#include "cone/modes.hpp"

#include "cone/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cone {

namespace {

void require_circle(const ConeModel& model) {
    if (model.cross_section.kind != CrossSectionKind::circle)
        throw UnsupportedCrossSection("mode decomposition needs a circle cross-section, got " +
                                      to_string(model.cross_section.kind));
}

}  // namespace

double circle_eigenfunction(int k, int l, double alpha, double theta) {
    const double pi = std::numbers::pi;
    if (k == 0) return 1.0 / std::sqrt(2 * pi * alpha);
    const double c = 1.0 / std::sqrt(pi * alpha);
    return l == 0 ? c * std::cos(k * theta) : c * std::sin(k * theta);
}

std::vector<int> circle_indices(const ConeModel& model, const SpectrumTable& table) {
    require_circle(model);
    std::vector<int> ks;
    for (const auto& e : table.entries()) {
        const double k = model.cross_section.alpha * std::sqrt(std::max(0.0, e.lambda - model.a));
        ks.push_back(static_cast<int>(std::lround(k)));
    }
    return ks;
}

ModeField mode_decompose(const PolarSamples& samples, const ConeModel& model, GridPtr grid, TablePtr table) {
    require_circle(model);
    const auto ks = circle_indices(model, *table);
    const int k_max = *std::max_element(ks.begin(), ks.end());
    const std::size_t M = samples.angular;
    if (M < static_cast<std::size_t>(std::max(4, 4 * k_max)))
        throw AliasingError("mode_decompose: " + std::to_string(M) + " angles cannot resolve circle index " +
                            std::to_string(k_max) + " (need " + std::to_string(std::max(4, 4 * k_max)) + ")");
    if (samples.radial != grid->size() || samples.values.size() != samples.radial * M)
        throw ShapeError("mode_decompose: sample array does not match the grid");

    const double alpha = model.cross_section.alpha;
    const double dsigma = alpha * 2 * std::numbers::pi / static_cast<double>(M);
    std::vector<double> basis(table->slots() * M);
    for (std::size_t e = 0; e < table->size(); ++e)
        for (int l = 0; l < (*table)[e].d; ++l)
            for (std::size_t j = 0; j < M; ++j) {
                const double theta = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
                basis[table->slot(e, l) * M + j] = circle_eigenfunction(ks[e], l, alpha, theta) * dsigma;
            }

    ModeField field(table, grid);
    const std::size_t S = table->slots(), R = grid->size();
    std::vector<double> discarded(R, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < R; ++i) {
        double energy = 0;
        for (std::size_t j = 0; j < M; ++j) energy += std::norm(samples.at(i, j)) * dsigma;
        double kept = 0;
        for (std::size_t s = 0; s < S; ++s) {
            cplx acc{};
            for (std::size_t j = 0; j < M; ++j) acc += samples.at(i, j) * basis[s * M + j];
            field.values()[s * R + i] = acc;
            kept += std::norm(acc);
        }
        discarded[i] = std::max(0.0, energy - kept);
    }
    double mass = 0;
    for (std::size_t i = 0; i < R; ++i) mass += grid->weight(i) * discarded[i];
    field.discarded_mass = mass;
    return field;
}

PolarSamples mode_recompose(const ModeField& field, const ConeModel& model, std::size_t angular) {
    require_circle(model);
    const auto& table = *field.table();
    const auto ks = circle_indices(model, table);
    if (angular == 0) throw DomainError("mode_recompose: need at least one angle");
    PolarSamples out{field.nodes(), angular, std::vector<cplx>(field.nodes() * angular)};
    const double alpha = model.cross_section.alpha;
    for (std::size_t e = 0; e < table.size(); ++e)
        for (int l = 0; l < table[e].d; ++l) {
            auto a = field.mode(table.slot(e, l));
            for (std::size_t j = 0; j < angular; ++j) {
                const double theta = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angular);
                const double phi = circle_eigenfunction(ks[e], l, alpha, theta);
                for (std::size_t i = 0; i < out.radial; ++i) out.at(i, j) += a[i] * phi;
            }
        }
    return out;
}

double parseval_check(const ModeField& field, const PolarSamples& samples, const ConeModel& model) {
    require_circle(model);
    if (samples.radial != field.nodes()) throw ShapeError("parseval_check: sample array does not match the field");
    const double dsigma = model.cross_section.alpha * 2 * std::numbers::pi / static_cast<double>(samples.angular);
    double worst = 0;
    for (std::size_t i = 0; i < samples.radial; ++i) {
        double energy = 0, kept = 0;
        for (std::size_t j = 0; j < samples.angular; ++j) energy += std::norm(samples.at(i, j)) * dsigma;
        for (std::size_t s = 0; s < field.slots(); ++s) kept += std::norm(field.mode(s)[i]);
        worst = std::max(worst, std::fabs(energy - kept));
    }
    return worst;
}

}  // namespace cone
