#include "idie/catalog.hpp"

#include <cmath>

namespace idie {

namespace {

ScalarFn constant_fn(double c) {
    return [c](double) { return c; };
}

Vector scalar(double v) { return Vector::Constant(1, v); }

ProblemInstance paper_example(const Parameters& p) {
    const double lg = p.at("L_G");
    const double r = p.at("r_eff");
    const double sign = p.at("kernel_sign");
    if (sign != 1.0 && sign != -1.0) throw StructuralError("paper_example: kernel_sign must be -1 or +1");

    ProblemInstance out;
    auto& pr = out.problem;
    pr.dimension = 1;
    pr.generator = Matrix::Identity(1, 1);
    pr.delay = r;
    pr.lags = {r};
    pr.horizon = 2.0;
    const double offset = 1.0 - std::sin(5.0);
    pr.field = [offset, r](double, const HistorySegment& w, const Vector& z) {
        return scalar(offset - std::sin(w(-r)(0)) + z(0));
    };
    pr.kernel = [sign, r](double, double, const HistorySegment& w) { return scalar(sign + std::cos(w(-r)(0))); };
    pr.window_integrand = [lg, r](double, const HistorySegment& w) { return scalar(lg * std::sin(w(-r)(0))); };
    pr.jump_maps = {[](const Vector& x) -> Vector { return x.array().sin().matrix(); }};
    pr.impulse_times = {1.0};
    pr.window_theta = {0.5};
    pr.window_tau = {0.5};
    pr.history = [](double t) { return scalar(t); };

    auto& lip = out.lipschitz;
    lip.field_lipschitz = constant_fn(1.0);
    lip.kernel_lipschitz = constant_fn(1.0);
    lip.window_lipschitz = lg;
    lip.jump_lipschitz = {1.0};
    lip.field_lipschitz_tilde = constant_fn(1.0);
    lip.window_lipschitz_tilde = lg;
    lip.jump_deviation = {0.0};
    return out;
}

ProblemInstance pure_semigroup(const Parameters& p) {
    const double a = p.at("growth");
    ProblemInstance out;
    auto& pr = out.problem;
    pr.dimension = 1;
    pr.generator = Matrix::Constant(1, 1, a);
    pr.delay = 1.0;
    pr.horizon = 2.0;
    pr.field = [](double, const HistorySegment&, const Vector&) { return Vector::Zero(1).eval(); };
    pr.kernel = [](double, double, const HistorySegment&) { return Vector::Zero(1).eval(); };
    pr.window_integrand = [](double, const HistorySegment&) { return Vector::Zero(1).eval(); };
    pr.history = [](double) { return scalar(1.0); };
    return out;
}

ProblemInstance method_of_steps(const Parameters& p) {
    const double r = p.at("delay");
    ProblemInstance out;
    auto& pr = out.problem;
    pr.dimension = 1;
    pr.generator = Matrix::Zero(1, 1);
    pr.delay = r;
    pr.horizon = p.at("horizon");
    pr.field = [r](double, const HistorySegment& w, const Vector&) { return w(-r); };
    pr.kernel = [](double, double, const HistorySegment&) { return Vector::Zero(1).eval(); };
    pr.window_integrand = [](double, const HistorySegment&) { return Vector::Zero(1).eval(); };
    pr.history = [](double) { return scalar(1.0); };
    out.lipschitz.field_lipschitz = constant_fn(1.0);
    out.lipschitz.field_lipschitz_tilde = constant_fn(1.0);
    return out;
}

ProblemInstance integral_impulse(const Parameters& p) {
    const double lg = p.at("L_G");
    const double rho = p.at("rho");
    const double mu = p.at("mu");
    constexpr double r = 0.5;

    ProblemInstance out;
    auto& pr = out.problem;
    pr.dimension = 2;
    pr.generator.resize(2, 2);
    pr.generator << -0.5, 0.3, -0.3, -0.5;
    pr.delay = r;
    pr.lags = {r, 0.5 * r};
    pr.horizon = 2.0;
    pr.field = [rho](double t, const HistorySegment& w, const Vector& z) {
        const Vector now = w(0.0);
        const Vector past = w(-r);
        Vector v(2);
        v << std::sin(past(1)) + 0.5 * std::tanh(z(0)), 0.5 * std::cos(now(0) + t) + 0.5 * std::sin(z(1));
        return (rho * v).eval();
    };
    pr.kernel = [](double t, double, const HistorySegment& w) {
        Vector u(2);
        u << 0.5 * std::sin(w(0.0)(0)) * std::cos(t), 0.3 * std::tanh(w(-r)(1));
        return u;
    };
    pr.window_integrand = [lg, mu](double, const HistorySegment& w) {
        Vector g(2);
        g << lg * std::sin(w(0.0)(0)) + mu, lg * std::cos(w(-0.5 * r)(1)) + 0.5 * mu;
        return g;
    };
    pr.jump_maps = {
        [](const Vector& x) -> Vector { return x.array().tanh().matrix(); },
        [](const Vector& x) -> Vector { return (0.5 * x.array().sin() + 0.2).matrix(); },
    };
    pr.impulse_times = {0.7, 1.4};
    pr.window_theta = {0.1, 0.0};
    pr.window_tau = {0.4, 0.3};
    pr.history = [](double t) {
        Vector h(2);
        h << std::cos(2.0 * t), 0.5 + t;
        return h;
    };

    auto& lip = out.lipschitz;
    lip.field_lipschitz = constant_fn(std::abs(rho));
    lip.kernel_lipschitz = constant_fn(0.5);
    lip.window_lipschitz = lg;
    lip.jump_lipschitz = {1.0, 0.5};
    lip.field_parameter_sensitivity = 1.5;
    lip.window_parameter_sensitivity = 1.0;
    lip.field_lipschitz_tilde = constant_fn(std::abs(rho));
    lip.window_lipschitz_tilde = lg;
    lip.jump_deviation = {0.0, 0.0};
    return out;
}

}  // namespace

Parameters CatalogEntry::resolve(const Parameters& overrides) const {
    Parameters values;
    for (const auto& range : free_parameters) values[range.name] = range.default_value;
    for (const auto& [key, value] : overrides) {
        auto it = values.find(key);
        if (it == values.end()) throw StructuralError(name + ": unknown parameter '" + key + "'");
        it->second = value;
    }
    for (const auto& range : free_parameters) {
        const double v = values.at(range.name);
        if (!(v >= range.lower && v <= range.upper))
            throw StructuralError(name + ": parameter '" + range.name + "' = " + std::to_string(v) + " outside [" +
                                  std::to_string(range.lower) + ", " + std::to_string(range.upper) + "]");
    }
    return values;
}

ProblemInstance CatalogEntry::instantiate(const Parameters& overrides) const {
    return builder(resolve(overrides));
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> entries;
    entries.push_back({"paper_example",
                       "w' = w + 1 - sin 5 - sin w(t-r) + int_0^t (c + cos w(s-r)) ds on [0,2], jump sin(int G) at t=1 "
                       "over a zero-length window, history w(t) = t",
                       {{"L_G", 0.0, 1.0, 0.01, "Lipschitz constant of G(t, w) = L_G sin w(t-r)"},
                        {"r_eff", 0.05, 5.0, 1.0, "effective delay r"},
                        {"kernel_sign", -1.0, 1.0, -1.0, "constant term c of the kernel U = c + cos w(s-r); -1 or +1"}},
                       paper_example});
    entries.push_back({"pure_semigroup",
                       "w' = a w on [0,2], history 1, no forcing and no impulses",
                       {{"growth", -2.0, 2.0, 1.0, "scalar generator a"}},
                       pure_semigroup});
    entries.push_back({"method_of_steps",
                       "w'(t) = w(t - r), history 1, no impulses",
                       {{"delay", 0.1, 2.0, 1.0, "delay r"}, {"horizon", 0.1, 4.0, 2.0, "horizon b"}},
                       method_of_steps});
    entries.push_back({"integral_impulse",
                       "two-dimensional damped rotation with delayed nonlinear forcing scaled by rho and "
                       "two integral impulses whose integrand is shifted by mu",
                       {{"L_G", 0.0, 0.5, 0.1, "Lipschitz constant of G"},
                        {"rho", 0.0, 2.0, 1.0, "field parameter (V = rho V0)"},
                        {"mu", -1.0, 1.0, 0.0, "window parameter (G = L_G g0 + mu c)"}},
                       integral_impulse});
    return entries;
}

std::optional<CatalogEntry> find_entry(const std::string& name) {
    for (auto& entry : build_catalog())
        if (entry.name == name) return entry;
    return std::nullopt;
}

}  // namespace idie
