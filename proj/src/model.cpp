#include "alab/model.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "alab/error.hpp"

namespace alab {

namespace {

void check_input(const MlpParams& params, std::span<const double> x) {
    if (x.size() != params.input_dim()) {
        throw Error(Errc::DimensionMismatch, "input has " + std::to_string(x.size()) + " features, model expects " +
                                                 std::to_string(params.input_dim()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "input feature is not finite");
    }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
    return {x.data(), static_cast<Eigen::Index>(x.size())};
}

void check_shapes(const Encoder& a, const Encoder& b) {
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols() || a.bias.size() != b.bias.size()) {
        throw Error(Errc::ShapeMismatch, "encoder shapes differ");
    }
}

}  // namespace

MlpParams zero_params(std::size_t d, std::size_t h, std::size_t n) {
    const auto di = static_cast<Eigen::Index>(d), hi = static_cast<Eigen::Index>(h), ni = static_cast<Eigen::Index>(n);
    return MlpParams{Encoder{Eigen::MatrixXd::Zero(hi, di), Eigen::VectorXd::Zero(hi)},
                     Head{Eigen::MatrixXd::Zero(ni, hi), Eigen::VectorXd::Zero(ni)}};
}

MlpParams init_params(std::size_t d, std::size_t h, std::size_t n, Rng& rng) {
    if (d == 0 || h == 0 || n < 2) throw Error(Errc::ShapeMismatch, "invalid network dimensions");
    MlpParams p = zero_params(d, h, n);
    auto fill = [&rng](Eigen::MatrixXd& w) {
        const double a = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> u(-a, a);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = u(rng);
        }
    };
    fill(p.encoder.weight);
    fill(p.head.weight);
    return p;
}

Eigen::VectorXd logits(const MlpParams& params, std::span<const double> x) {
    check_input(params, x);
    const Eigen::VectorXd hidden = (params.encoder.weight * as_vector(x) + params.encoder.bias).cwiseMax(0.0);
    return params.head.weight * hidden + params.head.bias;
}

ProbVec softmax(const Eigen::VectorXd& z) {
    const double top = z.maxCoeff();
    std::vector<double> e(static_cast<std::size_t>(z.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j) e[static_cast<std::size_t>(j)] = std::exp(z[j] - top);
    return normalize(RawVec(std::move(e)));
}

ProbVec forward(const MlpParams& params, std::span<const double> x) { return softmax(logits(params, x)); }

double cross_entropy(std::span<const double> target, std::span<const double> p) {
    if (target.size() != p.size()) throw Error(Errc::DimensionMismatch, "target and prediction sizes differ");
    double loss = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (target[j] != 0.0) loss -= target[j] * std::log(std::max(p[j], kLogClamp));
    }
    return loss;
}

namespace {

// Accumulates weight * dH/dparams for one sample and returns H.
double accumulate_sample(const MlpParams& params, std::span<const double> x, std::span<const double> target,
                         double weight, MlpGrads& g) {
    check_input(params, x);
    const auto xv = as_vector(x);
    const Eigen::VectorXd pre = params.encoder.weight * xv + params.encoder.bias;
    const Eigen::VectorXd hidden = pre.cwiseMax(0.0);
    const ProbVec p = softmax(params.head.weight * hidden + params.head.bias);

    // Entries clamped at kLogClamp contribute a constant, so they drop out of the gradient.
    const Eigen::Index n = static_cast<Eigen::Index>(p.size());
    double active_mass = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (p[static_cast<std::size_t>(j)] > kLogClamp) active_mass += target[static_cast<std::size_t>(j)];
    }
    Eigen::VectorXd dlogits(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double active_target = p[jj] > kLogClamp ? target[jj] : 0.0;
        dlogits[j] = weight * (p[jj] * active_mass - active_target);
    }

    g.head.weight.noalias() += dlogits * hidden.transpose();
    g.head.bias += dlogits;
    Eigen::VectorXd dpre = params.head.weight.transpose() * dlogits;
    for (Eigen::Index k = 0; k < dpre.size(); ++k) {
        if (!(pre[k] > 0.0)) dpre[k] = 0.0;
    }
    g.encoder.weight.noalias() += dpre * xv.transpose();
    g.encoder.bias += dpre;
    return cross_entropy(target, p.values());
}

}  // namespace

LossResult loss_and_grads(const MlpParams& params, std::span<const LabeledSample> labeled,
                          std::span<const SoftSample> unlabeled, double eta) {
    if (!(eta >= 0.0)) throw Error(Errc::OutOfRange, "eta must be >= 0");
    const std::size_t n = params.classes();
    LossResult out;
    out.grads = zero_params(params.input_dim(), params.hidden_dim(), n);

    if (!labeled.empty()) {
        const double w = 1.0 / static_cast<double>(labeled.size());
        std::vector<double> onehot(n, 0.0);
        for (const auto& s : labeled) {
            if (s.label >= n) throw Error(Errc::OutOfRange, "label " + std::to_string(s.label));
            onehot[s.label] = 1.0;
            out.supervised += accumulate_sample(params, s.x, onehot, w, out.grads);
            onehot[s.label] = 0.0;
        }
        out.supervised *= w;
    }
    if (!unlabeled.empty()) {
        const double w = eta / static_cast<double>(unlabeled.size());
        for (const auto& s : unlabeled) {
            if (s.target.size() != n) throw Error(Errc::DimensionMismatch, "soft label size differs from class count");
            out.unsupervised += accumulate_sample(params, s.x, s.target, w, out.grads);
        }
        out.unsupervised /= static_cast<double>(unlabeled.size());
    }
    out.total = out.supervised + eta * out.unsupervised;
    return out;
}

void sgd_step(MlpParams& params, const MlpGrads& grads, double lr) {
    if (!(lr > 0.0)) throw Error(Errc::OutOfRange, "learning rate must be > 0");
    check_shapes(params.encoder, grads.encoder);
    params.encoder.weight -= lr * grads.encoder.weight;
    params.encoder.bias -= lr * grads.encoder.bias;
    params.head.weight -= lr * grads.head.weight;
    params.head.bias -= lr * grads.head.bias;
}

double learning_rate(std::size_t epoch, double base, std::span<const std::size_t> decay_epochs, double factor) {
    double lr = base;
    for (std::size_t e : decay_epochs) {
        if (epoch >= e) lr *= factor;
    }
    return lr;
}

TwoStream ema_couple(TwoStream ts) {
    check_shapes(ts.encoder1, ts.student.encoder);
    const double w = ts.omega;
    ts.encoder1.weight = ts.encoder1.weight * w + ts.student.encoder.weight * (1.0 - w);
    ts.encoder1.bias = ts.encoder1.bias * w + ts.student.encoder.bias * (1.0 - w);
    return ts;
}

namespace {

constexpr char kMagic[5] = {'A', 'L', 'A', 'B', '1'};

static_assert(std::endian::native == std::endian::little, "binary parameter format assumes a little-endian host");

void write_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    }
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()));
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(Errc::ParseError, "truncated parameter header");
    return v;
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!in.read(reinterpret_cast<char*>(&m(r, c)), sizeof(double))) {
                throw Error(Errc::ParseError, "truncated parameter file");
            }
        }
    }
}

void read_vector(std::istream& in, Eigen::VectorXd& v) {
    if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()))) {
        throw Error(Errc::ParseError, "truncated parameter file");
    }
}

}  // namespace

void save_params(const TwoStream& ts, const std::filesystem::path& path) {
    check_shapes(ts.encoder1, ts.student.encoder);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out.write(kMagic, sizeof kMagic);
    write_u32(out, static_cast<std::uint32_t>(ts.student.input_dim()));
    write_u32(out, static_cast<std::uint32_t>(ts.student.hidden_dim()));
    write_u32(out, static_cast<std::uint32_t>(ts.student.classes()));
    write_matrix(out, ts.encoder1.weight);
    write_vector(out, ts.encoder1.bias);
    write_matrix(out, ts.student.encoder.weight);
    write_vector(out, ts.student.encoder.bias);
    write_matrix(out, ts.student.head.weight);
    write_vector(out, ts.student.head.bias);
}

TwoStream load_params(const std::filesystem::path& path, double omega) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    char magic[sizeof kMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw Error(Errc::ParseError, "bad magic in " + path.string());
    }
    const auto d = read_u32(in), h = read_u32(in), n = read_u32(in);
    TwoStream ts;
    ts.omega = omega;
    ts.student = zero_params(d, h, n);
    ts.encoder1 = ts.student.encoder;
    read_matrix(in, ts.encoder1.weight);
    read_vector(in, ts.encoder1.bias);
    read_matrix(in, ts.student.encoder.weight);
    read_vector(in, ts.student.encoder.bias);
    read_matrix(in, ts.student.head.weight);
    read_vector(in, ts.student.head.bias);
    return ts;
}

}  // namespace alab
