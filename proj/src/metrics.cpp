#include "perconv/metrics.hpp"

#include "perconv/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace perconv {

std::string ClassificationReport::to_json() const {
    nlohmann::json j{{"accuracy", accuracy},
                     {"precision", precision},
                     {"recall", recall},
                     {"f1", f1},
                     {"threshold", threshold}};
    if (auc)
        j["auc"] = *auc;
    else
        j["auc"] = nullptr;
    return j.dump();
}

std::string RegressionReport::to_json() const {
    nlohmann::json j{{"r_squared", r_squared}, {"rmse", rmse}};
    return j.dump();
}

ClassificationReport classification_metrics(const std::vector<double>& scores,
                                            const std::vector<int>& labels, double threshold) {
    if (scores.size() != labels.size() || scores.empty())
        throw DataError("scores/labels must be non-empty and equal length");
    ClassificationReport rep;
    rep.threshold = threshold;

    std::size_t tp = 0, tn = 0, fp = 0, fn = 0, n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] >= threshold;
        bool truth = labels[i] != 0;
        (truth ? n_pos : n_neg)++;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
        else ++tn;
    }
    const double n = static_cast<double>(scores.size());
    rep.accuracy = (tp + tn) / n;
    rep.precision = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
    rep.recall = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
    rep.f1 = (rep.precision + rep.recall > 0)
                 ? 2 * rep.precision * rep.recall / (rep.precision + rep.recall)
                 : 0.0;

    if (n_pos == 0 || n_neg == 0) return rep; // AUC undefined, left absent

    // Mann-Whitney ranks with midrank tie correction.
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] != 0) rank_sum_pos += midrank;
        i = j;
    }
    double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    rep.auc = u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));

    // ROC over distinct thresholds, descending score; ties grouped.
    rep.roc_points.push_back({0.0, 0.0});
    std::size_t tp_c = 0, fp_c = 0;
    for (std::size_t k = order.size(); k > 0;) {
        std::size_t j = k;
        double s = scores[order[k - 1]];
        while (j > 0 && scores[order[j - 1]] == s) {
            if (labels[order[j - 1]] != 0) ++tp_c;
            else ++fp_c;
            --j;
        }
        k = j;
        rep.roc_points.push_back({static_cast<double>(fp_c) / n_neg,
                                  static_cast<double>(tp_c) / n_pos});
    }
    return rep;
}

RegressionReport regression_metrics(const std::vector<double>& predictions,
                                    const std::vector<double>& targets) {
    if (predictions.size() != targets.size() || predictions.size() < 2)
        throw DataError("regression metrics need >= 2 matched points");
    double mean = 0.0;
    for (double t : targets) mean += t;
    mean /= static_cast<double>(targets.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double r = predictions[i] - targets[i];
        double d = targets[i] - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) throw DataError("target variance is zero; R^2 undefined");

    RegressionReport rep;
    rep.r_squared = 1.0 - ss_res / ss_tot;
    rep.rmse = std::sqrt(ss_res / static_cast<double>(targets.size()));
    rep.scatter.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        rep.scatter.push_back({targets[i], predictions[i]});
    return rep;
}

} // namespace perconv
