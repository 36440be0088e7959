#include "binapprox/crr_market.hpp"

#include "binapprox/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace binapprox {

void CrrTree::validate() const {
    if (!(s0 > 0.0)) throw std::invalid_argument("crr: S0 must be positive");
    if (!(down > 0.0 && down < 1.0)) throw std::invalid_argument("crr: d1 must lie in (0, 1)");
    if (!(up > 0.0) || !std::isfinite(up)) throw std::invalid_argument("crr: d2 must be positive");
    if (!(rho >= 1.0) || !std::isfinite(rho)) throw std::invalid_argument("crr: rho must be >= 1");
    if (periods == 0) throw std::invalid_argument("crr: need at least one period");
}

double CrrTree::discounted(std::size_t k, std::size_t i) const {
    return s0 * std::pow(1.0 + up, static_cast<double>(i)) *
           std::pow(1.0 - down, static_cast<double>(k - i));
}

double CrrTree::price(std::size_t k, std::size_t i) const {
    return std::pow(rho, static_cast<double>(k)) * discounted(k, i);
}

double risk_neutral_prob(double down, double up) {
    if (!(down > 0.0 && down < 1.0) || !(up > 0.0)) {
        throw std::invalid_argument("risk_neutral_prob: need d1 in (0, 1) and d2 > 0");
    }
    return down / (down + up);
}

double price_european(const CrrTree& tree, const Payoff& payoff) {
    tree.validate();
    const double p = risk_neutral_prob(tree.down, tree.up);
    const std::size_t n = tree.periods;
    // Values are kept discounted (divided by B_n), so each step back is a
    // plain p*-average.
    const double discount = std::pow(tree.rho, -static_cast<double>(n));
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        v[i] = discount * payoff(tree.price(n, i));
        if (!std::isfinite(v[i])) throw NumericFailure("crr: non-finite payoff at terminal node");
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t i = 0; i <= k; ++i) v[i] = p * v[i + 1] + (1.0 - p) * v[i];
    }
    return v[0];
}

double price_european_direct(const CrrTree& tree, const Payoff& payoff) {
    tree.validate();
    const double p = risk_neutral_prob(tree.down, tree.up);
    const std::size_t n = tree.periods;
    const auto nd = static_cast<double>(n);
    double total = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const auto id = static_cast<double>(i);
        const double log_w = std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0) +
                             id * std::log(p) + (nd - id) * std::log1p(-p);
        total += std::exp(log_w) * payoff(tree.price(n, i));
    }
    return total * std::pow(tree.rho, -nd);
}

RealizedTree tree_from_tracker(const MultiplicativePath& y, double rho) {
    if (!y.is_binomial()) {
        throw std::invalid_argument("tree_from_tracker: path does not use constant rates d1, d2");
    }
    const double delta = y.delta();
    RealizedTree out;
    out.tree = CrrTree{y.y0(), y.rates().down * delta, y.rates().up * delta, rho, y.intervals()};
    out.tree.validate();
    out.up_moves.resize(y.intervals() + 1);
    out.up_moves[0] = 0;
    for (std::size_t k = 0; k < y.intervals(); ++k) {
        out.up_moves[k + 1] = out.up_moves[k] + (y.factors()[k] == y.rates().up ? 1 : 0);
    }
    return out;
}

}  // namespace binapprox
