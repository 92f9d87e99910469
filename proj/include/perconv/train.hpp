#pragma once

#include "perconv/dataset.hpp"
#include "perconv/metrics.hpp"
#include "perconv/model_io.hpp"
#include "perconv/nn.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace perconv {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct TrainConfig {
    double lr = 1e-4;
    int epochs = 200;
    int batch_size = 32;
    AdamConfig adam;
    std::uint64_t seed = 0;
    Task task = Task::Classify;
    bool shuffle_each_epoch = true;

    void validate() const {
        if (lr <= 0) throw ConfigError("lr must be positive");
        if (epochs < 1) throw ConfigError("epochs must be >= 1");
        if (batch_size < 2) throw ConfigError("batch_size must be >= 2 (batch norm)");
    }
};

// Per-parameter Adam state.
template <class T>
struct AdamState {
    std::vector<Array<T>> m;
    std::vector<Array<T>> v;
    long long t = 0;
};

template <class T>
AdamState<T> make_adam_state(const Network<T>& net) {
    AdamState<T> st;
    for (const auto& e : net.entries) {
        if (!e.trainable) continue;
        st.m.push_back(Array<T>::zeros(e.value.shape));
        st.v.push_back(Array<T>::zeros(e.value.shape));
    }
    return st;
}

// One Adam update with bias correction over matched param/grad lists.
template <class T>
void adam_step(std::vector<Array<T>*>& params, const std::vector<const Array<T>*>& grads,
               AdamState<T>& state, double lr, const AdamConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ShapeError("adam state size mismatch");
    ++state.t;
    const double b1 = cfg.beta1, b2 = cfg.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Array<T>& w = *params[p];
        const Array<T>& g = *grads[p];
        if (!same_shape(w, g) || !same_shape(w, state.m[p]))
            throw ShapeError("adam gradient shape mismatch");
        for (std::size_t i = 0; i < w.size(); ++i) {
            double gi = static_cast<double>(g.data[i]);
            double mi = b1 * state.m[p].data[i] + (1 - b1) * gi;
            double vi = b2 * state.v[p].data[i] + (1 - b2) * gi * gi;
            state.m[p].data[i] = static_cast<T>(mi);
            state.v[p].data[i] = static_cast<T>(vi);
            double mhat = mi / bc1, vhat = vi / bc2;
            w.data[i] = static_cast<T>(w.data[i] - lr * mhat / (std::sqrt(vhat) + cfg.eps));
        }
    }
}

// Task loss on the tape: stable-logit BCE for Classify, MSE for Regress.
template <class T>
ad::Ref task_loss(ad::Tape<T>& tape, ad::Ref pred, ad::Ref target, Task task) {
    return task == Task::Classify ? ad::bce_with_logits_loss(tape, pred, target)
                                  : ad::mse_loss(tape, pred, target);
}

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0;
    std::optional<ClassificationReport> classification;
    std::optional<RegressionReport> regression;
};

template <class T>
struct TrainResult {
    Network<T> final_net;
    Network<T> best_net; // best by test AUC (classify) or R^2 (regress)
    double best_metric = 0;
    int best_epoch = -1;
    std::vector<EpochRecord> history;
};

// Eval-mode metric pass over a sample list.
template <class T>
EpochRecord evaluate_samples(Network<T>& net, const std::vector<EncodedSample>& samples,
                             Task task) {
    EpochRecord rec;
    std::vector<double> outs, targets;
    std::vector<int> labels;
    const std::size_t chunk = 256;
    for (std::size_t b = 0; b < samples.size(); b += chunk) {
        std::size_t e = std::min(b + chunk, samples.size());
        auto [x, y] = make_batch(samples, b, e);
        Array<T> pred = net.predict(x.template cast<T>());
        for (std::size_t i = 0; i < pred.size(); ++i) {
            outs.push_back(static_cast<double>(pred.data[i]));
            targets.push_back(static_cast<double>(y.data[i]));
            labels.push_back(y.data[i] >= 0.5f ? 1 : 0);
        }
    }
    if (task == Task::Classify)
        rec.classification = classification_metrics(outs, labels);
    else
        rec.regression = regression_metrics(outs, targets);
    return rec;
}

// Full optimization loop. Records per-epoch train loss and test metrics,
// keeps the best-by-test-metric checkpoint, and aborts on non-finite loss
// with the offending batch range in the message.
template <class T>
TrainResult<T> train(Network<T> net, const SplitDataset& data, const TrainConfig& cfg,
                     const std::function<void(const EpochRecord&)>& on_epoch = nullptr) {
    cfg.validate();
    if (data.train.empty()) throw DataError("empty training set");
    TrainResult<T> result{net, net, -1e300, -1, {}};

    AdamState<T> adam = make_adam_state(net);
    Rng shuffle_rng(cfg.seed ^ 0x5b4d3c2b1a09f8e7ULL);
    std::vector<std::size_t> order(data.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<EncodedSample> shuffled(data.train);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle_each_epoch) {
            shuffle_rng.shuffle(order);
            for (std::size_t i = 0; i < order.size(); ++i) shuffled[i] = data.train[order[i]];
        }
        double loss_sum = 0;
        std::size_t n_batches = 0;
        for (std::size_t b = 0; b < shuffled.size(); b += cfg.batch_size) {
            std::size_t e = std::min(b + cfg.batch_size, shuffled.size());
            if (e - b < 2) break; // last incomplete batch below the BN minimum
            auto [x, y] = make_batch(shuffled, b, e);

            ad::Tape<T> tape;
            ad::Ref xr = tape.leaf(x.template cast<T>(), false);
            ad::Ref yr = tape.leaf(y.template cast<T>(), false);
            std::vector<std::pair<int, ad::Ref>> param_refs;
            ad::Ref pred = net.forward(tape, xr, ad::BnMode::Train, &param_refs);
            ad::Ref loss = task_loss(tape, pred, yr, cfg.task);
            double loss_val = static_cast<double>(tape.value(loss).data[0]);
            if (!std::isfinite(loss_val))
                throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch records [" + std::to_string(b) + ", " +
                                    std::to_string(e) + ")");
            loss_sum += loss_val;
            ++n_batches;
            tape.backward(loss);

            std::vector<Array<T>*> params;
            std::vector<const Array<T>*> grads;
            for (auto [idx, ref] : param_refs) {
                params.push_back(&net.entries[idx].value);
                grads.push_back(&tape.grad(ref));
            }
            adam_step(params, grads, adam, cfg.lr, cfg.adam);
        }

        EpochRecord rec;
        if (!data.test.empty()) rec = evaluate_samples(net, data.test, cfg.task);
        rec.epoch = epoch;
        rec.train_loss = n_batches ? loss_sum / static_cast<double>(n_batches) : 0.0;
        double metric = rec.classification && rec.classification->auc
                            ? *rec.classification->auc
                            : (rec.regression ? rec.regression->r_squared : -1e300);
        if (metric > result.best_metric) {
            result.best_metric = metric;
            result.best_epoch = epoch;
            result.best_net = net;
        }
        result.history.push_back(rec);
        if (on_epoch) on_epoch(result.history.back());
    }
    result.final_net = std::move(net);
    if (result.best_epoch < 0) result.best_net = result.final_net;
    return result;
}

std::string epoch_record_to_json(const EpochRecord& rec, Periodicity periodicity);

} // namespace perconv
