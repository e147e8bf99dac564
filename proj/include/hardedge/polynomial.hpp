#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace hardedge {

/// Real polynomial stored by ascending coefficients, c[k] multiplies x^k.
struct Polynomial {
    std::vector<double> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) { trim(); }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }

    /// Degree of the highest non-zero coefficient; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c.size()) - 1; }

    /// Index of the first non-zero coefficient; -1 for the zero polynomial.
    int valuation() const {
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0.0) return static_cast<int>(k);
        return -1;
    }

    double leading() const { return c.empty() ? 0.0 : c.back(); }

    Polynomial derivative() const {
        std::vector<double> d;
        for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
        return Polynomial(std::move(d));
    }

    void trim() {
        while (!c.empty() && c.back() == 0.0) c.pop_back();
    }
};

}  // namespace hardedge
