#include "perconv/nn.hpp"

#include <nlohmann/json.hpp>

namespace perconv {

const char* task_name(Task t) { return t == Task::Classify ? "classify" : "regress"; }
const char* periodicity_name(Periodicity p) {
    return p == Periodicity::Cylindrical ? "cylindrical" : "flat";
}
const char* scale_name(ScalePreset s) { return s == ScalePreset::Full ? "full" : "reduced"; }

Task task_from_name(const std::string& s) {
    if (s == "classify") return Task::Classify;
    if (s == "regress") return Task::Regress;
    throw ConfigError("unknown task: " + s);
}

Periodicity periodicity_from_name(const std::string& s) {
    if (s == "cylindrical" || s == "on") return Periodicity::Cylindrical;
    if (s == "flat" || s == "off") return Periodicity::Flat;
    throw ConfigError("unknown periodicity: " + s);
}

ScalePreset scale_from_name(const std::string& s) {
    if (s == "full") return ScalePreset::Full;
    if (s == "reduced") return ScalePreset::Reduced;
    throw ConfigError("unknown scale: " + s);
}

std::string config_to_json(const NetworkConfig& cfg) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& st : cfg.stages) {
        stages.push_back({{"out_channels", st.out_channels},
                          {"kernel", {st.kh, st.kw}},
                          {"stride", {st.sh, st.sw}},
                          {"padding", {st.ph, st.pw}}});
    }
    nlohmann::json j{{"task", task_name(cfg.task)},
                     {"periodicity", periodicity_name(cfg.periodicity)},
                     {"scale", scale_name(cfg.scale)},
                     {"stem_channels", cfg.stem_channels},
                     {"initial_blocks", cfg.initial_blocks},
                     {"block_kernel", {cfg.block_kh, cfg.block_kw}},
                     {"stages", stages},
                     {"fc_widths", cfg.fc_widths},
                     {"seed", cfg.seed}};
    return j.dump();
}

NetworkConfig config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NetworkConfig cfg;
    cfg.task = task_from_name(j.at("task").get<std::string>());
    cfg.periodicity = periodicity_from_name(j.at("periodicity").get<std::string>());
    cfg.scale = scale_from_name(j.at("scale").get<std::string>());
    cfg.stem_channels = j.at("stem_channels").get<int>();
    cfg.initial_blocks = j.at("initial_blocks").get<int>();
    cfg.block_kh = j.at("block_kernel")[0].get<int>();
    cfg.block_kw = j.at("block_kernel")[1].get<int>();
    cfg.stages.clear();
    for (const auto& st : j.at("stages")) {
        DownsampleStageSpec s;
        s.out_channels = st.at("out_channels").get<int>();
        s.kh = st.at("kernel")[0].get<int>();
        s.kw = st.at("kernel")[1].get<int>();
        s.sh = st.at("stride")[0].get<int>();
        s.sw = st.at("stride")[1].get<int>();
        s.ph = st.at("padding")[0].get<int>();
        s.pw = st.at("padding")[1].get<int>();
        cfg.stages.push_back(s);
    }
    cfg.fc_widths = j.at("fc_widths").get<std::vector<int>>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

} // namespace perconv
