#include "qtilt/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "qtilt/errors.hpp"

namespace qtilt {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr double kStationaryResidualTol = 1e-12;
const double kLog2E = 1.4426950408889634;  // 1 / ln 2

std::string join_violations(const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << "invalid machine:";
    for (const auto& v : vs) os << " [" << v.invariant << "] " << v.detail << ";";
    return os.str();
}

/// Strong connectivity of the nonzero pattern: forward and backward
/// reachability from state 0.
bool strongly_connected(const Matrix& t) {
    const int n = t.rows();
    auto reach = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                const double w = forward ? t(i, j) : t(j, i);
                if (w != 0.0 && !seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        return std::count(seen.begin(), seen.end(), 1) == n;
    };
    return reach(true) && reach(false);
}

}  // namespace

int Alphabet::index_of(const std::string& s) const {
    for (size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == s) return static_cast<int>(i);
    return -1;
}

Matrix Hmm::transition_matrix() const {
    Matrix sum(num_states(), num_states());
    for (const Matrix& m : t) sum = add(sum, m);
    return sum;
}

std::vector<Violation> validate(const Hmm& hmm) {
    std::vector<Violation> out;
    const int n = hmm.num_states();
    const int a = hmm.num_symbols();

    if (n == 0) out.push_back({"labels", "no states", 0.0});
    if (a == 0) out.push_back({"labels", "empty alphabet", 0.0});
    if (std::set<std::string>(hmm.states.begin(), hmm.states.end()).size() !=
        hmm.states.size())
        out.push_back({"labels", "duplicate state labels", 0.0});
    if (std::set<std::string>(hmm.alphabet.symbols.begin(), hmm.alphabet.symbols.end())
            .size() != hmm.alphabet.symbols.size())
        out.push_back({"labels", "duplicate symbol labels", 0.0});
    if (static_cast<int>(hmm.t.size()) != a) {
        out.push_back({"shape", "matrix count != alphabet size", 0.0});
        return out;
    }
    for (int x = 0; x < a; ++x) {
        if (hmm.t[x].rows() != n || hmm.t[x].cols() != n) {
            out.push_back({"shape", "matrix for symbol '" + hmm.alphabet.symbols[x] +
                                        "' is not N x N", 0.0});
            return out;
        }
    }
    if (!out.empty()) return out;

    for (int x = 0; x < a; ++x) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double v = hmm.t[x](i, j);
                if (!(v >= 0.0) || v > 1.0 + 1e-12 || !std::isfinite(v)) {
                    std::ostringstream os;
                    os << "t[" << hmm.alphabet.symbols[x] << "](" << hmm.states[i] << ","
                       << hmm.states[j] << ") = " << v << " outside [0,1]";
                    out.push_back({"entry-range", os.str(), v});
                }
            }
        }
    }

    const Matrix t = hmm.transition_matrix();
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += t(i, j);
        if (std::abs(s - 1.0) > kRowSumTol) {
            std::ostringstream os;
            os << "row '" << hmm.states[i] << "' sums to " << s;
            out.push_back({"row-stochastic", os.str(), std::abs(s - 1.0)});
        }
    }

    if (!strongly_connected(t))
        out.push_back({"irreducible", "transition graph is not strongly connected", 0.0});

    return out;
}

void require_valid(const Hmm& hmm) {
    const auto vs = validate(hmm);
    if (!vs.empty()) throw ValidationError(join_violations(vs));
}

Distribution stationary_distribution(const Hmm& hmm) {
    require_valid(hmm);
    const int n = hmm.num_states();
    Distribution d;
    if (n == 1) {
        d.p = {1.0};
        return d;
    }

    // State-folding (GTH) elimination: only additions, multiplications and
    // divisions of nonnegative quantities, so components of pi spanning
    // many orders of magnitude come out to full relative accuracy.
    Matrix p = hmm.transition_matrix();
    std::vector<double> fold_mass(n, 1.0);  // off-diagonal mass of row k at fold time
    for (int k = n - 1; k >= 1; --k) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += p(k, j);
        if (s <= 0.0)
            throw NonConvergence("stationary_distribution: folding hit a zero row "
                                 "(numerically reducible chain)");
        fold_mass[k] = s;
        for (int j = 0; j < k; ++j) p(k, j) /= s;
        for (int i = 0; i < k; ++i) {
            const double pik = p(i, k);
            if (pik == 0.0) continue;
            for (int j = 0; j < k; ++j) p(i, j) += pik * p(k, j);
        }
    }
    std::vector<double> pi(n, 0.0);
    pi[0] = 1.0;
    for (int k = 1; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += pi[i] * p(i, k);
        pi[k] = s / fold_mass[k];
    }
    double total = 0.0;
    for (double v : pi) total += v;
    for (double& v : pi) v /= total;

    const Matrix t = hmm.transition_matrix();
    const std::vector<double> piT = vec_times_matrix(pi, t);
    double residual = 0.0;
    for (int i = 0; i < n; ++i) residual = std::max(residual, std::abs(piT[i] - pi[i]));
    if (residual >= kStationaryResidualTol)
        throw NonConvergence("stationary_distribution: residual " + std::to_string(residual) +
                             " above 1e-12");
    for (double v : pi)
        if (!(v > 0.0))
            throw NonConvergence("stationary_distribution: nonpositive component");

    d.p = std::move(pi);
    return d;
}

double shannon_entropy(const Distribution& d) {
    for (double v : d.p)
        if (!(v >= 0.0)) throw ValidationError("shannon_entropy: negative entry");

    // Evaluate the dominant entry's log through the complementary mass:
    // log2(p_max) = log1p(-(1 - p_max)) / ln 2. For nearly deterministic
    // distributions 1 - p_max is only representable as the sum of the
    // other entries, so this keeps the entropy's relative accuracy.
    size_t kmax = 0;
    for (size_t i = 1; i < d.p.size(); ++i)
        if (d.p[i] > d.p[kmax]) kmax = i;

    double h = 0.0;
    double rest = 0.0;
    for (size_t i = 0; i < d.p.size(); ++i) {
        if (i == kmax) continue;
        const double v = d.p[i];
        rest += v;
        if (v > 0.0) h -= v * std::log2(v);
    }
    const double pmax = d.p[kmax];
    if (pmax > 0.0) {
        if (pmax > 0.9)
            h -= pmax * std::log1p(-rest) * kLog2E;
        else
            h -= pmax * std::log2(pmax);
    }
    return h;
}

double statistical_complexity(const Hmm& hmm) {
    return shannon_entropy(stationary_distribution(hmm));
}

bool check_unifilar(const Hmm& hmm) {
    for (const Matrix& m : hmm.t) {
        for (int i = 0; i < m.rows(); ++i) {
            int nonzero = 0;
            for (int j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0.0) ++nonzero;
            if (nonzero > 1) return false;
        }
    }
    return true;
}

double entropy_rate(const Hmm& hmm) {
    if (!check_unifilar(hmm))
        throw NotUnifilar("entropy_rate: closed form needs a unifilar machine");
    const Distribution pi = stationary_distribution(hmm);
    const int n = hmm.num_states();
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
        Distribution row;
        row.p.resize(hmm.num_symbols());
        for (int x = 0; x < hmm.num_symbols(); ++x) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += hmm.t[x](i, j);
            row.p[x] = s;
        }
        h += pi[i] * shannon_entropy(row);
    }
    return h;
}

namespace {

/// Follow every branch of the depth-r word tree, tracking for each start
/// state the unique current state (unifilar) or a dead marker. A word
/// fails to synchronize when two live branches end in different states.
bool synchronizes(const Hmm& hmm, const std::vector<int>& ends, int depth) {
    const int n = hmm.num_states();
    if (depth == 0) {
        int found = -1;
        for (int e : ends) {
            if (e < 0) continue;
            if (found >= 0 && e != found) return false;
            found = e;
        }
        return true;
    }
    for (int x = 0; x < hmm.num_symbols(); ++x) {
        std::vector<int> next(ends.size(), -1);
        bool alive = false;
        for (size_t k = 0; k < ends.size(); ++k) {
            if (ends[k] < 0) continue;
            for (int j = 0; j < n; ++j) {
                if (hmm.t[x](ends[k], j) != 0.0) {
                    next[k] = j;
                    alive = true;
                    break;
                }
            }
        }
        if (alive && !synchronizes(hmm, next, depth - 1)) return false;
    }
    return true;
}

}  // namespace

bool check_markov_order(const Hmm& hmm, int r) {
    if (r < 0) throw ValidationError("check_markov_order: r must be nonnegative");
    if (!check_unifilar(hmm))
        throw NotUnifilar("check_markov_order: requires a unifilar machine");
    if (r == 0) return hmm.num_states() == 1;
    std::vector<int> start(hmm.num_states());
    for (int i = 0; i < hmm.num_states(); ++i) start[i] = i;
    return synchronizes(hmm, start, r);
}

std::optional<int> find_markov_order(const Hmm& hmm, int r_max) {
    for (int r = 0; r <= r_max; ++r)
        if (check_markov_order(hmm, r)) return r;
    return std::nullopt;
}

double log2_word_probability(const Hmm& hmm, const std::vector<std::string>& word) {
    std::vector<double> v = stationary_distribution(hmm).p;
    double ll = 0.0;
    for (const std::string& s : word) {
        const int x = hmm.alphabet.index_of(s);
        if (x < 0) throw UnknownSymbol("symbol '" + s + "' not in alphabet");
        v = vec_times_matrix(v, hmm.t[x]);
        double mass = 0.0;
        for (double e : v) mass += e;
        if (mass <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log2(mass);
        for (double& e : v) e /= mass;
    }
    return ll;
}

double word_probability(const Hmm& hmm, const std::vector<std::string>& word) {
    const double ll = log2_word_probability(hmm, word);
    if (ll == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::min(1.0, std::exp2(ll));
}

double empirical_decay_rate(const Hmm& hmm, const std::vector<std::string>& word) {
    if (word.empty()) throw ValidationError("empirical_decay_rate: empty word");
    const double ll = log2_word_probability(hmm, word);
    if (ll == -std::numeric_limits<double>::infinity())
        throw ForbiddenWord("empirical_decay_rate: word has probability zero");
    return -ll / static_cast<double>(word.size());
}

std::vector<int> sample_path(const Hmm& hmm, int64_t n, uint64_t seed) {
    if (n < 0) throw ValidationError("sample_path: negative length");
    require_valid(hmm);
    const int ns = hmm.num_states();
    const int na = hmm.num_symbols();

    // cumulative start-state table and per-state cumulative joint
    // (symbol, successor) tables, symbol-major
    const Distribution pi = stationary_distribution(hmm);
    std::vector<double> cum_pi(ns);
    double acc = 0.0;
    for (int i = 0; i < ns; ++i) {
        acc += pi[i];
        cum_pi[i] = acc;
    }
    std::vector<std::vector<double>> cum_joint(ns);
    for (int i = 0; i < ns; ++i) {
        cum_joint[i].resize(static_cast<size_t>(na) * ns);
        double c = 0.0;
        for (int x = 0; x < na; ++x)
            for (int j = 0; j < ns; ++j) {
                c += hmm.t[x](i, j);
                cum_joint[i][static_cast<size_t>(x) * ns + j] = c;
            }
    }

    Rng rng(seed);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n));
    int state = rng.pick(cum_pi);
    for (int64_t k = 0; k < n; ++k) {
        const int idx = rng.pick(cum_joint[state]);
        out.push_back(idx / ns);
        state = idx % ns;
    }
    return out;
}

std::vector<std::string> to_labels(const Hmm& hmm, const std::vector<int>& symbol_indices) {
    std::vector<std::string> out;
    out.reserve(symbol_indices.size());
    for (int x : symbol_indices) out.push_back(hmm.alphabet.symbols[x]);
    return out;
}

}  // namespace qtilt
