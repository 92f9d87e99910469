#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace perconv {

struct ClassificationReport {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    std::optional<double> auc; // absent when only one class is present
    double threshold = 0.5;
    std::vector<std::pair<double, double>> roc_points; // (fpr, tpr)
    std::string to_json() const;
};

struct RegressionReport {
    double r_squared = 0;
    double rmse = 0; // eV
    std::vector<std::pair<double, double>> scatter; // (true, predicted)
    std::string to_json() const;
};

// Confusion-matrix metrics at `threshold` plus AUC via the Mann-Whitney
// rank statistic with tie correction (equal to the trapezoidal area under
// the ROC curve). ROC points are computed over all distinct score
// thresholds, ties grouped.
ClassificationReport classification_metrics(const std::vector<double>& scores,
                                            const std::vector<int>& labels,
                                            double threshold = 0.5);

// R^2 = 1 - SS_res/SS_tot about the target mean; RMSE in target units.
// Throws DataError on length mismatch, <2 points, or zero target variance.
RegressionReport regression_metrics(const std::vector<double>& predictions,
                                    const std::vector<double>& targets);

} // namespace perconv
