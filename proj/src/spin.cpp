#include "qtilt/spin.hpp"

#include <cmath>
#include <sstream>

#include "qtilt/errors.hpp"
#include "qtilt/io.hpp"
#include "qtilt/tilt.hpp"

namespace qtilt {

namespace {

const double kLog2E = 1.4426950408889634;

void require_model(const SpinModel& model) {
    if (!(model.t > 0.0)) throw ValidationError("spin model: temperature must be positive");
    if (!std::isfinite(model.j1) || !std::isfinite(model.j2) || !std::isfinite(model.h))
        throw ValidationError("spin model: couplings must be finite");
}

std::string model_name(const SpinModel& m) {
    std::ostringstream os;
    os << "ising_nnn_j1_" << format_double(m.j1) << "_j2_" << format_double(m.j2) << "_h_"
       << format_double(m.h) << "_T_" << format_double(m.t);
    return os.str();
}

constexpr double spin_value(int bit) { return bit == 0 ? -1.0 : 1.0; }

}  // namespace

std::vector<Matrix> transfer_matrix_parts(const SpinModel& model) {
    require_model(model);
    // pair states indexed 2*prev + cur with down = 0, up = 1
    std::vector<Matrix> parts(2, Matrix(4, 4));
    for (int prev = 0; prev < 2; ++prev) {
        for (int cur = 0; cur < 2; ++cur) {
            for (int next = 0; next < 2; ++next) {
                const double s = spin_value(prev);
                const double sp = spin_value(cur);
                const double spp = spin_value(next);
                const double w =
                    std::exp((model.j1 * sp * spp + model.j2 * s * spp + model.h * spp) /
                             model.t);
                parts[next](2 * prev + cur, 2 * cur + next) = w;
            }
        }
    }
    return parts;
}

Hmm ising_nnn_process(const SpinModel& model) {
    const std::vector<Matrix> parts = transfer_matrix_parts(model);
    std::vector<std::string> states = {
        std::string(kSpinDown) + kSpinDown, std::string(kSpinDown) + kSpinUp,
        std::string(kSpinUp) + kSpinDown, std::string(kSpinUp) + kSpinUp};
    Alphabet alphabet;
    alphabet.symbols = {kSpinDown, kSpinUp};
    return stochasticize(parts, std::move(states), std::move(alphabet), model_name(model)).hmm;
}

Hmm iid_field_process(double h, double t) {
    if (!(t > 0.0)) throw ValidationError("iid_field_process: temperature must be positive");
    const double p_up = 0.5 * (1.0 + std::tanh(h / t));
    Hmm hmm;
    std::ostringstream os;
    os << "iid_field_h_" << format_double(h) << "_T_" << format_double(t);
    hmm.name = os.str();
    hmm.states = {"S"};
    hmm.alphabet.symbols = {kSpinDown, kSpinUp};
    Matrix down(1, 1), up(1, 1);
    down(0, 0) = 1.0 - p_up;
    up(0, 0) = p_up;
    hmm.t = {down, up};
    return hmm;
}

double free_energy_density(const SpinModel& model) {
    std::vector<Matrix> parts = transfer_matrix_parts(model);
    Matrix v = add(parts[0], parts[1]);
    return -model.t * std::log(perron(v).lambda);
}

double decay_rate_from_energy(const SpinModel& model, double e) {
    require_model(model);
    return kLog2E / model.t * (e - free_energy_density(model));
}

double energy_from_decay_rate(const SpinModel& model, double u) {
    require_model(model);
    return free_energy_density(model) + u * model.t / kLog2E;
}

}  // namespace qtilt
