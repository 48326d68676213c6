#include "alab/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "alab/error.hpp"

namespace alab {

std::string_view to_string(AlignMode mode) noexcept {
    switch (mode) {
        case AlignMode::None: return "none";
        case AlignMode::Da: return "da";
        case AlignMode::Csda: return "csda";
    }
    return "unknown";
}

AlignMode parse_align_mode(std::string_view text) {
    if (text == "none") return AlignMode::None;
    if (text == "da") return AlignMode::Da;
    if (text == "csda") return AlignMode::Csda;
    throw Error(Errc::ConfigError, "alignment mode must be none, da or csda, got '" + std::string(text) + "'");
}

double eta(std::size_t epoch_t, std::size_t epochs) {
    if (epochs == 0 || epoch_t < 1 || epoch_t > epochs) {
        throw Error(Errc::OutOfRange, "epoch " + std::to_string(epoch_t) + " outside [1, " + std::to_string(epochs) + "]");
    }
    return static_cast<double>(epoch_t) / static_cast<double>(epochs);
}

void validate(const EngineConfig& cfg, std::size_t n) {
    const auto& s = cfg.schedule;
    if (s.epochs < 1) throw Error(Errc::ConfigError, "epochs must be >= 1");
    if (s.labeled_batch < 1 || s.unlabeled_batch < 1) throw Error(Errc::ConfigError, "batch sizes must be >= 1");
    if (!(s.base_lr > 0.0)) throw Error(Errc::ConfigError, "base learning rate must be > 0");
    if (!(cfg.omega > 0.0 && cfg.omega < 1.0)) throw Error(Errc::InvalidOmega, "omega must lie in (0, 1)");
    if (!(cfg.eps > 0.0)) throw Error(Errc::ConfigError, "eps must be > 0");
    if (cfg.hidden < 1) throw Error(Errc::ConfigError, "hidden width must be >= 1");
    if (!(cfg.jitter_sigma >= 0.0)) throw Error(Errc::ConfigError, "jitter sigma must be >= 0");
    validate(cfg.vcq, n);
}

std::vector<ProbVec> predict_all(const MlpParams& params, const Dataset& ds) {
    std::vector<ProbVec> out;
    out.reserve(ds.size());
    for (std::size_t k = 0; k < ds.size(); ++k) out.push_back(forward(params, ds.row(k)));
    return out;
}

Evaluation evaluate(const MlpParams& params, const Dataset& eval) {
    if (eval.empty()) throw Error(Errc::EmptyEvalSet, "evaluation set is empty");
    EvalBatch batch;
    batch.scores = predict_all(params, eval);
    batch.truth.reserve(eval.size());
    for (int y : eval.labels()) {
        if (y < 0) throw Error(Errc::UnknownLabel, "evaluation rows need true labels");
        batch.truth.push_back(static_cast<ClassIndex>(y));
    }
    Evaluation out;
    out.auc = auc_macro(batch);
    out.mca = mca(batch);
    out.confusion = confusion(batch);
    return out;
}

Evaluation evaluate(const TwoStream& ts, const Dataset& eval) { return evaluate(ts.student, eval); }

namespace {

enum Stream : std::uint64_t { kInit = 1, kShuffle = 2, kSweep = 3, kSample = 4 };

class Trainer {
public:
    Trainer(const DatasetSplit& data, const EngineConfig& cfg)
        : data_(data),
          cfg_(cfg),
          n_(data.labeled.classes()),
          init_rng_(derive_seed(cfg.schedule.seed, kInit)),
          shuffle_rng_(derive_seed(cfg.schedule.seed, kShuffle)),
          sweep_rng_(derive_seed(cfg.schedule.seed, kSweep)),
          sample_rng_(derive_seed(cfg.schedule.seed, kSample)),
          stats_(init_stats(n_, cfg.omega)),
          global_(init_global(n_, cfg.omega)),
          vcq_(n_, cfg.vcq) {
        const MlpParams init = init_params(data.labeled.dim(), cfg.hidden, n_, init_rng_);
        out_.model = TwoStream{init.encoder, init, cfg.omega};
        order_.resize(data.labeled.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
    }

    TrainOutput run() {
        for (std::size_t epoch = 1; epoch <= cfg_.schedule.epochs; ++epoch) run_epoch(epoch);
        return std::move(out_);
    }

private:
    void trace(std::size_t epoch, std::string_view step) {
        out_.trace.push_back(std::to_string(epoch) + ":" + std::string(step));
    }

    std::vector<Observation> labeled_observations(std::span<const std::size_t> rows) const {
        std::vector<Observation> obs;
        obs.reserve(rows.size());
        for (std::size_t k : rows) {
            obs.push_back({forward(out_.model.student, data_.labeled.row(k)),
                           static_cast<ClassIndex>(data_.labeled.label(k))});
        }
        return obs;
    }

    void observe_labeled(std::span<const std::size_t> rows) {
        const auto obs = labeled_observations(rows);
        stats_ = update_labeled(std::move(stats_), obs);
        global_ = update_global_labeled(std::move(global_), obs);
    }

    void train_epoch(std::size_t epoch, EpochRecord& rec) {
        const auto& s = cfg_.schedule;
        const double lr = learning_rate(epoch, s.base_lr, s.decay_epochs);
        std::shuffle(order_.begin(), order_.end(), shuffle_rng_);
        const std::size_t steps = (order_.size() + s.labeled_batch - 1) / s.labeled_batch;
        for (std::size_t step = 0; step < steps; ++step) {
            const std::size_t begin = step * s.labeled_batch;
            const std::span<const std::size_t> rows(order_.data() + begin,
                                                    std::min(s.labeled_batch, order_.size() - begin));
            std::vector<LabeledSample> labeled;
            labeled.reserve(rows.size());
            for (std::size_t k : rows) {
                labeled.push_back({data_.labeled.row(k), static_cast<ClassIndex>(data_.labeled.label(k))});
            }
            std::vector<QueueItem> drawn;
            if (epoch > 1 && !cfg_.supervised_only && vcq_.total_size() > 0) {
                drawn = vcq_.sample_batch(s.unlabeled_batch, sample_rng_, cfg_.jitter_sigma);
            }
            std::vector<SoftSample> soft;
            soft.reserve(drawn.size());
            for (const auto& item : drawn) soft.push_back({item.features, item.soft_label.values()});

            // Statistics see the predictions of the parameters the step starts from.
            observe_labeled(rows);
            const LossResult loss = loss_and_grads(out_.model.student, labeled, soft, rec.eta);
            sgd_step(out_.model.student, loss.grads, lr);
            rec.supervised_loss += loss.supervised;
            rec.unsupervised_loss += loss.unsupervised;
        }
        rec.supervised_loss /= static_cast<double>(steps);
        rec.unsupervised_loss /= static_cast<double>(steps);
        trace(epoch, "train");
    }

    AlignedGuess align(const ProbVec& q) const {
        switch (cfg_.align) {
            case AlignMode::Csda: return align_csda(q, stats_, cfg_.temperature, cfg_.eps);
            case AlignMode::Da: return {align_da(q, global_.labeled, global_.unlabeled, cfg_.eps), argmax_class(q), q};
            case AlignMode::None: break;
        }
        return {q, argmax_class(q), q};
    }

    void run_epoch(std::size_t epoch) {
        EpochRecord rec;
        rec.epoch = epoch;
        rec.eta = eta(epoch, cfg_.schedule.epochs);
        train_epoch(epoch, rec);

        if (epoch == 1) {
            out_.model.encoder1 = out_.model.student.encoder;
            trace(epoch, "init_encoder1");
            std::vector<std::size_t> rows(order_.size());
            std::iota(rows.begin(), rows.end(), std::size_t{0});
            for (std::size_t begin = 0; begin < rows.size(); begin += cfg_.schedule.labeled_batch) {
                const std::size_t len = std::min(cfg_.schedule.labeled_batch, rows.size() - begin);
                observe_labeled(std::span<const std::size_t>(rows.data() + begin, len));
            }
            trace(epoch, "labeled_pass");
        } else {
            out_.model = ema_couple(std::move(out_.model));
            trace(epoch, "ema_couple");
        }

        EpochDiagnostics diag;
        diag.distances_pre = class_distance_matrix(stats_);
        const auto predictions = predict_all(out_.model.student, data_.unlabeled);
        for (std::size_t begin = 0; begin < predictions.size(); begin += cfg_.schedule.unlabeled_batch) {
            const std::size_t len = std::min(cfg_.schedule.unlabeled_batch, predictions.size() - begin);
            std::vector<Observation> obs;
            obs.reserve(len);
            for (std::size_t k = begin; k < begin + len; ++k) obs.push_back({predictions[k], argmax_class(predictions[k])});
            stats_ = update_unlabeled(std::move(stats_), obs, cfg_.eps);
            global_ = update_global_unlabeled(std::move(global_), obs);
        }
        trace(epoch, "update_stats");
        diag.distances_post = class_distance_matrix(stats_);
        rec.frobenius_distance = diag.distances_post.frobenius;

        std::vector<AlignedGuess> guesses;
        guesses.reserve(predictions.size());
        for (const auto& q : predictions) guesses.push_back(align(q));
        trace(epoch, "align");

        vcq_.refresh(stats_);
        trace(epoch, "vcq_refresh");

        rec.pseudo_label_histogram.assign(n_, 0);
        if (!cfg_.supervised_only) {
            std::vector<std::size_t> sweep(guesses.size());
            std::iota(sweep.begin(), sweep.end(), std::size_t{0});
            std::shuffle(sweep.begin(), sweep.end(), sweep_rng_);
            for (std::size_t k : sweep) {
                const auto row = data_.unlabeled.row(k);
                const ClassIndex cls = argmax_class(guesses[k].q_tilde);
                QueueItem item{{row.begin(), row.end()}, guesses[k].q_tilde, epoch, k};
                if (!vcq_.offer(std::move(item))) continue;
                ++rec.pseudo_label_histogram[cls];
                ++diag.accepted;
                if (k < data_.unlabeled_truth.size() && data_.unlabeled_truth[k] == static_cast<int>(cls)) {
                    ++diag.accepted_correct;
                }
            }
            trace(epoch, "offer");
        }

        if (!data_.val.empty()) {
            const Evaluation val = evaluate(out_.model.student, data_.val);
            rec.val_auc = val.auc;
            rec.val_mca = val.mca;
        }
        trace(epoch, "evaluate");

        diag.stats = stats_;
        for (ClassIndex i = 0; i < n_; ++i) {
            diag.capacity.push_back(vcq_.capacity(i));
            diag.occupancy.push_back(vcq_.occupancy(i));
            diag.tau.push_back(vcq_.threshold(i));
        }
        out_.records.push_back(std::move(rec));
        out_.diagnostics.push_back(std::move(diag));
    }

    const DatasetSplit& data_;
    const EngineConfig& cfg_;
    std::size_t n_;
    Rng init_rng_;
    Rng shuffle_rng_;
    Rng sweep_rng_;
    Rng sample_rng_;
    ClassStats stats_;
    GlobalMarginals global_;
    Vcq vcq_;
    std::vector<std::size_t> order_;
    TrainOutput out_;
};

}  // namespace

TrainOutput self_train(const DatasetSplit& data, const EngineConfig& cfg) {
    if (data.labeled.empty()) throw Error(Errc::EmptyLabeledSet, "self-training needs labeled samples");
    const std::size_t n = data.labeled.classes();
    const std::size_t d = data.labeled.dim();
    for (const Dataset* ds : {&data.unlabeled, &data.val, &data.test}) {
        if (ds->empty()) continue;
        if (ds->classes() != n || ds->dim() != d) throw Error(Errc::DimensionMismatch, "split parts disagree on shape");
    }
    validate(cfg, n);
    return Trainer(data, cfg).run();
}

}  // namespace alab
