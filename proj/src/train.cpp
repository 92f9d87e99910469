#include "perconv/train.hpp"

#include <nlohmann/json.hpp>

namespace perconv {

std::string epoch_record_to_json(const EpochRecord& rec, Periodicity periodicity) {
    nlohmann::json j{{"epoch", rec.epoch},
                     {"train_loss", rec.train_loss},
                     {"periodicity", periodicity_name(periodicity)}};
    if (rec.classification) {
        const auto& c = *rec.classification;
        j["test_metrics"] = {{"accuracy", c.accuracy},
                             {"precision", c.precision},
                             {"recall", c.recall},
                             {"f1", c.f1},
                             {"auc", c.auc ? nlohmann::json(*c.auc) : nlohmann::json()}};
    } else if (rec.regression) {
        j["test_metrics"] = {{"r_squared", rec.regression->r_squared},
                             {"rmse", rec.regression->rmse}};
    } else {
        j["test_metrics"] = nullptr;
    }
    return j.dump();
}

} // namespace perconv
