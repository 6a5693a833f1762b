#include "gnde/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gnde/config.hpp"
#include "gnde/errors.hpp"

namespace gnde {

// ---- activation -----------------------------------------------------------------

Activation Activation::leaky_relu(double slope) {
    if (!(slope >= 0.0 && slope <= 1.0)) {
        throw InvalidParameter("leaky relu slope must lie in [0,1], got " + format_double(slope));
    }
    return Activation(Kind::leaky_relu, slope);
}

Activation Activation::parse(std::string_view text) {
    if (text == "relu") return relu();
    if (text == "tanh") return tanh();
    if (text == "identity") return identity();
    if (text == "leaky_relu") return leaky_relu(0.01);
    if (text.starts_with("leaky_relu:")) return leaky_relu(parse_double(text.substr(11)));
    throw InvalidParameter("unknown activation '" + std::string(text) + "'");
}

std::string Activation::name() const {
    switch (kind_) {
        case Kind::relu: return "relu";
        case Kind::leaky_relu: return "leaky_relu:" + format_double(slope_);
        case Kind::tanh: return "tanh";
        case Kind::identity: return "identity";
    }
    return "unknown";
}

double Activation::operator()(double x) const noexcept {
    switch (kind_) {
        case Kind::relu: return x > 0.0 ? x : 0.0;
        case Kind::leaky_relu: return x > 0.0 ? x : slope_ * x;
        case Kind::tanh: return std::tanh(x);
        case Kind::identity: return x;
    }
    return x;
}

// ---- filter bank ----------------------------------------------------------------

void FilterBank::validate() const {
    if (layers_ < 1 || features_ < 1 || taps_ < 1) {
        throw InvalidParameter("filter bank needs L, F, K >= 1");
    }
    std::size_t per = law_ == TimeLaw::constant ? 1 : 2 * modes_ + 1;
    std::size_t expected = layers_ * features_ * features_ * taps_ * per;
    if (values_.size() != expected) {
        throw DimensionError("filter bank expects " + std::to_string(expected) +
                             " coefficients, got " + std::to_string(values_.size()));
    }
    if (law_ == TimeLaw::fourier && !(horizon_ > 0.0)) {
        throw InvalidParameter("fourier time law needs a positive horizon");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidParameter("filter coefficients must be finite");
    }
}

FilterBank FilterBank::constant(std::size_t layers, std::size_t features, std::size_t taps,
                                std::vector<double> values) {
    FilterBank b;
    b.layers_ = layers;
    b.features_ = features;
    b.taps_ = taps;
    b.law_ = TimeLaw::constant;
    b.values_ = std::move(values);
    b.validate();
    return b;
}

FilterBank FilterBank::fourier(std::size_t layers, std::size_t features, std::size_t taps,
                               std::size_t modes, double horizon, std::vector<double> values) {
    FilterBank b;
    b.layers_ = layers;
    b.features_ = features;
    b.taps_ = taps;
    b.law_ = TimeLaw::fourier;
    b.modes_ = modes;
    b.horizon_ = horizon;
    b.values_ = std::move(values);
    b.validate();
    return b;
}

FilterBank FilterBank::random_constant(std::size_t layers, std::size_t features, std::size_t taps,
                                       Rng& rng) {
    std::vector<double> v(layers * features * features * taps);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return constant(layers, features, taps, std::move(v));
}

FilterBank FilterBank::random_fourier(std::size_t layers, std::size_t features, std::size_t taps,
                                      std::size_t modes, double horizon, double scale, Rng& rng) {
    std::vector<double> v(layers * features * features * taps * (2 * modes + 1));
    for (double& x : v) x = rng.uniform(-scale, scale);
    return fourier(layers, features, taps, modes, horizon, std::move(v));
}

FilterCoefficients FilterBank::at(double t) const {
    FilterCoefficients h{layers_, features_, taps_, {}};
    if (law_ == TimeLaw::constant) {
        h.values = values_;
        return h;
    }
    if (!(t >= 0.0 && t <= horizon_)) {
        throw DomainError("filter time " + format_double(t) + " outside [0, " +
                          format_double(horizon_) + "]");
    }
    const std::size_t count = layers_ * features_ * features_ * taps_;
    const std::size_t stride = 2 * modes_ + 1;
    std::vector<double> cosines(modes_);
    std::vector<double> sines(modes_);
    for (std::size_t m = 0; m < modes_; ++m) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(m + 1) * t / horizon_;
        cosines[m] = std::cos(w);
        sines[m] = std::sin(w);
    }
    h.values.resize(count);
    for (std::size_t c = 0; c < count; ++c) {
        const double* block = values_.data() + c * stride;
        double s = block[0];
        for (std::size_t m = 0; m < modes_; ++m) {
            s += block[1 + m] * cosines[m] + block[1 + modes_ + m] * sines[m];
        }
        h.values[c] = s;
    }
    return h;
}

std::string FilterBank::to_record(std::uint64_t seed) const {
    std::ostringstream out;
    out << "layers = " << layers_ << "\n";
    out << "features = " << features_ << "\n";
    out << "taps = " << taps_ << "\n";
    out << "law = " << (law_ == TimeLaw::constant ? "constant" : "fourier") << "\n";
    if (law_ == TimeLaw::fourier) {
        out << "modes = " << modes_ << "\n";
        out << "horizon = " << format_double(horizon_) << "\n";
    }
    out << "seed = " << seed << "\n";
    out << "coefficients = ";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out << (i ? "," : "") << format_double(values_[i]);
    }
    out << "\n";
    return out.str();
}

FilterBank FilterBank::from_record(const KeyValues& record) {
    auto dim = [&](const char* key) {
        auto v = record.get_int(key, 0);
        if (v < 1) throw InvalidParameter(std::string("filter record needs ") + key + " >= 1");
        return static_cast<std::size_t>(v);
    };
    const std::size_t l = dim("layers");
    const std::size_t f = dim("features");
    const std::size_t k = dim("taps");
    std::string law = record.get_string("law", "constant");
    auto values = record.get_doubles("coefficients", {});
    if (law == "constant") return constant(l, f, k, std::move(values));
    if (law == "fourier") {
        auto modes = record.get_int("modes", 1);
        if (modes < 0) throw InvalidParameter("modes must be >= 0");
        return fourier(l, f, k, static_cast<std::size_t>(modes), record.get_double("horizon", 1.0),
                       std::move(values));
    }
    throw InvalidParameter("unknown time law '" + law + "'");
}

double h_sup(const FilterBank& bank) {
    double best = 0.0;
    if (bank.law() == TimeLaw::constant) {
        for (double v : bank.values()) best = std::max(best, std::abs(v));
        return best;
    }
    const double horizon = bank.horizon();
    for (std::size_t i = 0; i < kHSupGrid; ++i) {
        double t = horizon * static_cast<double>(i) / static_cast<double>(kHSupGrid - 1);
        for (double v : bank.at(std::min(t, horizon)).values) best = std::max(best, std::abs(v));
    }
    return best;
}

double h_sup_certified(const FilterBank& bank) {
    if (bank.law() == TimeLaw::constant) return h_sup(bank);
    const std::size_t stride = 2 * bank.modes() + 1;
    const auto& v = bank.values();
    double best = 0.0;
    for (std::size_t c = 0; c < v.size(); c += stride) {
        double s = 0.0;
        for (std::size_t j = 0; j < stride; ++j) s += std::abs(v[c + j]);
        best = std::max(best, s);
    }
    return best;
}

// ---- forward map ------------------------------------------------------------------

namespace {

// out = S v for an n x F block v.
void shift_apply(const Matrix& s, const Matrix& v, Matrix& out) {
    const std::size_t n = s.rows();
    const std::size_t f = v.cols();
    for (std::size_t i = 0; i < n; ++i) {
        auto srow = s.row(i);
        auto orow = out.row(i);
        if (f == 1) {
            const double* vd = v.data().data();
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += srow[j] * vd[j];
            orow[0] = acc;
            continue;
        }
        std::fill(orow.begin(), orow.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = srow[j];
            auto vrow = v.row(j);
            for (std::size_t g = 0; g < f; ++g) orow[g] += w * vrow[g];
        }
    }
}

}  // namespace

void gnn_forward(const Matrix& shift, const Matrix& x, const FilterCoefficients& h,
                 const Activation& act, ForwardWorkspace& ws, Matrix& out) {
    const std::size_t n = x.rows();
    const std::size_t f = h.features;
    if (shift.rows() != n || shift.cols() != n) {
        throw DimensionError("shift is " + std::to_string(shift.rows()) + "x" +
                             std::to_string(shift.cols()) + " but features have " +
                             std::to_string(n) + " rows");
    }
    if (x.cols() != f) {
        throw DimensionError("features have " + std::to_string(x.cols()) +
                             " columns, filters expect " + std::to_string(f));
    }
    if (h.values.size() != h.layers * f * f * h.taps) {
        throw DimensionError("filter coefficient array has the wrong size");
    }
    ws.powers.resize(h.taps);
    for (auto& p : ws.powers) {
        if (p.rows() != n || p.cols() != f) p = Matrix(n, f);
    }
    if (ws.next.rows() != n || ws.next.cols() != f) ws.next = Matrix(n, f);
    ws.current = x;
    for (std::size_t l = 0; l < h.layers; ++l) {
        ws.powers[0] = ws.current;
        for (std::size_t k = 1; k < h.taps; ++k) shift_apply(shift, ws.powers[k - 1], ws.powers[k]);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t fo = 0; fo < f; ++fo) {
                double acc = 0.0;
                for (std::size_t g = 0; g < f; ++g) {
                    for (std::size_t k = 0; k < h.taps; ++k) {
                        acc += h(l, fo, g, k) * ws.powers[k](i, g);
                    }
                }
                ws.next(i, fo) = act(acc);
            }
        }
        std::swap(ws.current, ws.next);
    }
    out = ws.current;
}

Matrix gnn_forward(const Matrix& shift, const Matrix& x, const FilterCoefficients& h,
                   const Activation& act) {
    ForwardWorkspace ws;
    Matrix out;
    gnn_forward(shift, x, h, act, ws, out);
    return out;
}

double scaled_norm(const Matrix& x) {
    double s = 0.0;
    for (double v : x.data()) s += v * v;
    return std::sqrt(s / static_cast<double>(x.rows()));
}

double scaled_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("scaled distance needs equal shapes");
    }
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.rows()));
}

}  // namespace gnde
