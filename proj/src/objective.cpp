#include "femsel/objective.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace femsel {

std::string_view to_string(ObjectiveKind kind) {
    return kind == ObjectiveKind::aic ? "AIC" : "SSE";
}

ObjectiveKind parse_objective_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "AIC") return ObjectiveKind::aic;
    if (upper == "SSE") return ObjectiveKind::sse;
    throw std::invalid_argument("unknown objective '" + std::string(text) + "'");
}

Residuals residuals(const MeasuredData& measured, std::span<const double> fem) {
    if (fem.size() != measured.frequencies_hz.size()) {
        throw std::invalid_argument("expected " +
                                    std::to_string(measured.frequencies_hz.size()) +
                                    " FE frequencies, got " + std::to_string(fem.size()));
    }
    Residuals r{};
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = measured.frequencies_hz[i] - fem[i];
    return r;
}

namespace {

double sum_of_squares(const Residuals& r) {
    double sum = 0.0;
    for (double x : r) sum += x * x;
    return sum;
}

}  // namespace

ObjectiveValue sse(const Residuals& r) {
    const double n = static_cast<double>(r.size());
    const double ss = sum_of_squares(r);
    return {ObjectiveKind::sse, ss / 2.0, ss / n, 0, r.size()};
}

ObjectiveValue aic(const Residuals& r, std::size_t d) {
    const double n = static_cast<double>(r.size());
    const double sigma_sq = sum_of_squares(r) / n;
    const double value =
        n * std::log(std::max(sigma_sq, kSigmaSquaredFloor)) + 2.0 * static_cast<double>(d);
    return {ObjectiveKind::aic, value, sigma_sq, d, r.size()};
}

ObjectiveValue evaluate_objective(ObjectiveKind kind, const Residuals& r, std::size_t d) {
    if (kind == ObjectiveKind::aic) return aic(r, d);
    ObjectiveValue v = sse(r);
    v.d = d;
    return v;
}

}  // namespace femsel
