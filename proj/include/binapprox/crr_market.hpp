#pragma once

#include "binapprox/log_tracker.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace binapprox {

/// Recombining Cox-Ross-Rubinstein tree for the discounted price
/// S~_{k+1} = S~_k (1 + zeta), zeta in {-down, up}, bond B_k = rho^k.
struct CrrTree {
    double s0 = 1.0;
    double down = 0.0;  // per-period d1 in (0, 1)
    double up = 0.0;    // per-period d2 > 0
    double rho = 1.0;   // per-period bond growth, >= 1
    std::size_t periods = 1;

    void validate() const;

    /// Discounted price after k periods with i up-moves.
    double discounted(std::size_t k, std::size_t i) const;
    /// Undiscounted price rho^k * discounted(k, i).
    double price(std::size_t k, std::size_t i) const;
};

/// p* = d1 / (d1 + d2): the unique up-probability making S~ a martingale.
double risk_neutral_prob(double down, double up);

using Payoff = std::function<double(double terminal_price)>;

/// rho^{-n} E*[payoff(S_n)] by backward induction.
double price_european(const CrrTree& tree, const Payoff& payoff);

/// Same expectation as a direct binomial-weight sum over terminal nodes.
double price_european_direct(const CrrTree& tree, const Payoff& payoff);

struct RealizedTree {
    CrrTree tree;
    // up_moves[k] = number of up-moves among the first k steps, so the
    // realized node at level k is (k, up_moves[k]).
    std::vector<std::size_t> up_moves;
};

/// Embeds a multiplicative tracker path as one realized path of the tree
/// with per-period rates d1 delta and d2 delta. Throws std::invalid_argument
/// if the path uses any factor other than -d1 or d2.
RealizedTree tree_from_tracker(const MultiplicativePath& y, double rho);

}  // namespace binapprox
