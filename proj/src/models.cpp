#include "qtilt/models.hpp"

#include <sstream>

#include "qtilt/errors.hpp"
#include "qtilt/io.hpp"

namespace qtilt {

Hmm make_perturbed_coins(double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw ValidationError("make_perturbed_coins: p, q must lie in (0, 1)");
    Hmm hmm;
    std::ostringstream name;
    name << "perturbed_coins_p" << format_double(p) << "_q" << format_double(q);
    hmm.name = name.str();
    hmm.states = {"A", "B"};
    hmm.alphabet.symbols = {"0", "1"};
    Matrix t0(2, 2), t1(2, 2);
    t0(0, 0) = p;
    t0(1, 0) = 1.0 - q;
    t1(0, 1) = 1.0 - p;
    t1(1, 1) = q;
    hmm.t = {t0, t1};
    return hmm;
}

Hmm make_period2() {
    Hmm hmm;
    hmm.name = "period2";
    hmm.states = {"A", "B"};
    hmm.alphabet.symbols = {"0", "1"};
    Matrix t0(2, 2), t1(2, 2);
    t0(0, 1) = 1.0;
    t1(1, 0) = 1.0;
    hmm.t = {t0, t1};
    return hmm;
}

Hmm make_fig1_six_state() {
    Hmm hmm;
    hmm.name = "fig1_six_state";
    hmm.states = {"A", "B", "C", "D", "E", "F"};
    hmm.alphabet.symbols = {"0", "1", "2"};
    hmm.t.assign(3, Matrix(6, 6));
    auto edge = [&](const char* from, const char* to, int sym) {
        int i = -1, j = -1;
        for (int k = 0; k < 6; ++k) {
            if (hmm.states[k] == from) i = k;
            if (hmm.states[k] == to) j = k;
        }
        hmm.t[sym](i, j) = 0.5;
    };
    // loop of 1s through A, D, E; loop of 0s through C, B, F
    edge("A", "D", 1);
    edge("D", "E", 1);
    edge("E", "A", 1);
    edge("C", "B", 0);
    edge("B", "F", 0);
    edge("F", "C", 0);
    // bridges between the loops
    edge("C", "A", 1);
    edge("E", "B", 0);
    // 2-labeled edges target only states with no outgoing 2, so "22" is forbidden
    edge("A", "C", 2);
    edge("D", "C", 2);
    edge("B", "E", 2);
    edge("F", "E", 2);
    return hmm;
}

Hmm make_iid(const std::vector<std::string>& symbols, const std::vector<double>& probs) {
    if (symbols.size() != probs.size())
        throw ValidationError("make_iid: symbol/probability count mismatch");
    Hmm hmm;
    hmm.name = "iid";
    hmm.states = {"S"};
    hmm.alphabet.symbols = symbols;
    for (double p : probs) {
        Matrix m(1, 1);
        m(0, 0) = p;
        hmm.t.push_back(m);
    }
    return hmm;
}

}  // namespace qtilt
