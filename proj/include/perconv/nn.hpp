#pragma once

#include "perconv/autodiff.hpp"
#include "perconv/encoder.hpp"
#include "perconv/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace perconv {

enum class Task { Classify, Regress };
enum class Periodicity { Cylindrical, Flat };
enum class ScalePreset { Full, Reduced };

struct DownsampleStageSpec {
    int out_channels = 0;
    int kh = 2, kw = 4;
    int sh = 1, sw = 2;
    int ph = 0, pw = 3;
};

// Layer-stack description as data. The instantiated stack is:
//   periodic conv [in=4 -> stem_channels, kernel (1,1)]
//   initial_blocks x basic periodic block [stem, stem, stem, block_kernel]
//   per stage: conv (zero-padded, strided) + BN + ReLU
//              + basic periodic block at the stage's channel count
//   flatten; FC(+ReLU) per fc_widths entry; FC -> 1
// Classify applies a sigmoid head at prediction time; training consumes
// the raw logit.
struct NetworkConfig {
    Task task = Task::Classify;
    Periodicity periodicity = Periodicity::Cylindrical;
    ScalePreset scale = ScalePreset::Full;
    int stem_channels = 10;
    int initial_blocks = 10;
    int block_kh = 3, block_kw = 3;
    std::vector<DownsampleStageSpec> stages;
    std::vector<int> fc_widths = {100, 100};
    std::uint64_t seed = 0;

    static NetworkConfig make(Task task, Periodicity periodicity, ScalePreset scale,
                              std::uint64_t seed) {
        NetworkConfig cfg;
        cfg.task = task;
        cfg.periodicity = periodicity;
        cfg.scale = scale;
        cfg.seed = seed;
        int n_stages = scale == ScalePreset::Full ? 6 : 3;
        cfg.initial_blocks = scale == ScalePreset::Full ? 10 : 2;
        for (int i = 0; i < n_stages; ++i)
            cfg.stages.push_back(DownsampleStageSpec{10 * (i + 2)});
        return cfg;
    }

    void validate() const {
        if (stem_channels < 1 || initial_blocks < 0) throw ConfigError("bad stem config");
        if (block_kw % 2 == 0) throw ConfigError("periodic conv kernel width must be odd");
        for (const auto& s : stages)
            if (s.out_channels < 1 || s.kh < 1 || s.kw < 1 || s.sh < 1 || s.sw < 1)
                throw ConfigError("bad downsample stage");
        for (int w : fc_widths)
            if (w < 1) throw ConfigError("bad fc width");
    }
};

const char* task_name(Task t);
const char* periodicity_name(Periodicity p);
const char* scale_name(ScalePreset s);
Task task_from_name(const std::string& s);
Periodicity periodicity_from_name(const std::string& s);
ScalePreset scale_from_name(const std::string& s);

std::string config_to_json(const NetworkConfig& cfg);
NetworkConfig config_from_json(const std::string& text);

// Circular width padding (Cylindrical) or zero padding (Flat) followed by
// a shape-preserving stride-1 conv. Kernel dims must be odd.
template <class T>
ad::Ref periodic_conv(ad::Tape<T>& tape, ad::Ref x, ad::Ref w, ad::Ref b,
                      Periodicity periodicity) {
    const auto& ws = tape.value(w).shape;
    const std::size_t kh = ws[2], kw = ws[3];
    if (kw % 2 == 0) throw ConfigError("periodic conv kernel width must be odd");
    const std::size_t ph = (kh - 1) / 2, pw = (kw - 1) / 2;
    if (periodicity == Periodicity::Cylindrical) {
        ad::Ref padded = ad::circular_pad_width(tape, x, pw);
        return ad::conv2d(tape, padded, w, b, 1, 1, ph, 0);
    }
    return ad::conv2d(tape, x, w, b, 1, 1, ph, pw);
}

// Instantiated parameters plus persistent batch-norm state, in build order.
template <class T>
class Network {
public:
    struct Entry {
        std::string name;
        Array<T> value;
        bool trainable = true;
    };

    NetworkConfig cfg;
    std::vector<Entry> entries;

    static Network build(const NetworkConfig& cfg) {
        cfg.validate();
        Network net;
        net.cfg = cfg;
        Rng rng(cfg.seed);
        int ch = TableTensor::kChannels;
        net.add_conv("stem", cfg.stem_channels, ch, 1, 1, rng);
        ch = cfg.stem_channels;
        for (int i = 0; i < cfg.initial_blocks; ++i)
            net.add_block("block" + std::to_string(i), ch, cfg, rng);
        for (std::size_t s = 0; s < cfg.stages.size(); ++s) {
            const auto& st = cfg.stages[s];
            std::string p = "stage" + std::to_string(s);
            net.add_conv(p + ".down", st.out_channels, ch, st.kh, st.kw, rng);
            net.add_bn(p + ".bn", st.out_channels);
            ch = st.out_channels;
            net.add_block(p + ".block", ch, cfg, rng);
        }
        // FC widths are resolved from the actual flattened size at forward
        // time; weights must be sized now, so compute the spatial trace.
        auto [h, w] = net.spatial_trace();
        int f = ch * h * w;
        for (std::size_t i = 0; i < cfg.fc_widths.size(); ++i) {
            net.add_linear("fc" + std::to_string(i), cfg.fc_widths[i], f, rng);
            f = cfg.fc_widths[i];
        }
        net.add_linear("head", 1, f, rng);
        return net;
    }

    // Output spatial size after the conv stack, from the conv shape formula.
    std::pair<int, int> spatial_trace() const {
        int h = kGridRows, w = kGridCols;
        for (const auto& st : cfg.stages) {
            h = (h + 2 * st.ph - st.kh) / st.sh + 1;
            w = (w + 2 * st.pw - st.kw) / st.sw + 1;
        }
        return {h, w};
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& e : entries)
            if (e.trainable) n += e.value.size();
        return n;
    }

    // Records the forward pass on `tape`. Returns the pre-head output [N,1]
    // (the classification logit; the regression value). When `param_refs`
    // is given, it receives (entry index, tape ref) for every trainable
    // entry so the optimizer can read gradients back.
    ad::Ref forward(ad::Tape<T>& tape, ad::Ref input, ad::BnMode mode,
                    std::vector<std::pair<int, ad::Ref>>* param_refs = nullptr) {
        Cursor cur{*this, tape, mode, param_refs, 0};
        ad::Ref x = features(cur, input);
        x = ad::flatten(tape, x);
        for (std::size_t i = 0; i < cfg.fc_widths.size(); ++i) {
            x = cur.fc(x);
            x = ad::relu(tape, x);
        }
        x = cur.fc(x);
        cur.finish();
        return x;
    }

    // Conv stack only (stem + blocks + downsampling stages), no FC head.
    ad::Ref forward_features(ad::Tape<T>& tape, ad::Ref input, ad::BnMode mode) {
        Cursor cur{*this, tape, mode, nullptr, 0};
        return features(cur, input);
    }

    // Eval-mode inference with the task head applied (sigmoid for Classify).
    Array<T> predict(const Array<T>& input) {
        ad::Tape<T> tape;
        ad::Ref x = tape.leaf(input, false);
        ad::Ref out = forward(tape, x, ad::BnMode::Eval);
        Array<T> v = tape.value(out);
        if (cfg.task == Task::Classify)
            for (T& z : v.data) z = T(1) / (T(1) + std::exp(-z));
        return v;
    }

    template <class U>
    Network<U> cast() const {
        Network<U> out;
        out.cfg = cfg;
        for (const auto& e : entries)
            out.entries.push_back({e.name, e.value.template cast<U>(), e.trainable});
        return out;
    }

private:
    static T fan_in_bound(std::size_t fan_in) {
        return T(1) / std::sqrt(static_cast<T>(fan_in));
    }

    Array<T> init_uniform(Shape shape, std::size_t fan_in, Rng& rng) {
        Array<T> a(std::move(shape));
        T b = fan_in_bound(fan_in);
        for (T& v : a.data) v = static_cast<T>(rng.uniform(-double(b), double(b)));
        return a;
    }

    void add_conv(const std::string& name, int c_out, int c_in, int kh, int kw, Rng& rng) {
        std::size_t fan_in = static_cast<std::size_t>(c_in) * kh * kw;
        entries.push_back({name + ".w",
                           init_uniform(Shape{(std::size_t)c_out, (std::size_t)c_in,
                                              (std::size_t)kh, (std::size_t)kw},
                                        fan_in, rng),
                           true});
        entries.push_back({name + ".b", init_uniform(Shape{(std::size_t)c_out}, fan_in, rng), true});
    }

    void add_linear(const std::string& name, int out, int in, Rng& rng) {
        entries.push_back({name + ".w",
                           init_uniform(Shape{(std::size_t)out, (std::size_t)in},
                                        (std::size_t)in, rng),
                           true});
        entries.push_back({name + ".b", init_uniform(Shape{(std::size_t)out}, (std::size_t)in, rng),
                           true});
    }

    void add_bn(const std::string& name, int c) {
        Shape s{(std::size_t)c};
        entries.push_back({name + ".gamma", Array<T>::full(s, T(1)), true});
        entries.push_back({name + ".beta", Array<T>::zeros(s), true});
        entries.push_back({name + ".running_mean", Array<T>::zeros(s), false});
        entries.push_back({name + ".running_var", Array<T>::full(s, T(1)), false});
    }

    void add_block(const std::string& name, int ch, const NetworkConfig& cfg, Rng& rng) {
        add_conv(name + ".pconv1", ch, ch, cfg.block_kh, cfg.block_kw, rng);
        add_bn(name + ".bn1", ch);
        add_conv(name + ".pconv2", ch, ch, cfg.block_kh, cfg.block_kw, rng);
        add_bn(name + ".bn2", ch);
    }

    // Walks `entries` in build order while recording the forward pass.
    struct Cursor {
        Network& net;
        ad::Tape<T>& tape;
        ad::BnMode mode;
        std::vector<std::pair<int, ad::Ref>>* param_refs;
        std::size_t idx;

        ad::Ref take() {
            Entry& e = net.entries.at(idx);
            ad::Ref r = tape.leaf(e.value, e.trainable);
            if (param_refs && e.trainable) param_refs->push_back({(int)idx, r});
            ++idx;
            return r;
        }

        ad::Ref conv(ad::Ref x, int sh, int sw, int ph, int pw, bool periodic) {
            ad::Ref w = take(), b = take();
            if (periodic) return periodic_conv(tape, x, w, b, net.cfg.periodicity);
            return ad::conv2d(tape, x, w, b, sh, sw, ph, pw);
        }

        ad::Ref bn(ad::Ref x) {
            ad::Ref gamma = take(), beta = take();
            Array<T>& mean = net.entries.at(idx++).value;
            Array<T>& var = net.entries.at(idx++).value;
            return ad::batch_norm(tape, x, gamma, beta, mean, var, mode);
        }

        // relu(BN(pconv2(relu(BN(pconv1(x))))) + x)
        ad::Ref block(ad::Ref x) {
            ad::Ref y = conv(x, 1, 1, 0, 0, true);
            y = bn(y);
            y = ad::relu(tape, y);
            y = conv(y, 1, 1, 0, 0, true);
            y = bn(y);
            return ad::relu(tape, ad::add(tape, y, x));
        }

        ad::Ref fc(ad::Ref x) {
            ad::Ref w = take(), b = take();
            return ad::linear(tape, x, w, b);
        }

        void finish() const {
            if (idx != net.entries.size())
                throw ConfigError("forward pass did not consume every parameter");
        }
    };

    ad::Ref features(Cursor& cur, ad::Ref input) {
        ad::Ref x = cur.conv(input, 1, 1, 0, 0, /*periodic=*/true);
        for (int i = 0; i < cfg.initial_blocks; ++i) x = cur.block(x);
        for (const auto& st : cfg.stages) {
            x = cur.conv(x, st.sh, st.sw, st.ph, st.pw, /*periodic=*/false);
            x = cur.bn(x);
            x = ad::relu(cur.tape, x);
            x = cur.block(x);
        }
        return x;
    }

    template <class U>
    friend class Network;
};

} // namespace perconv
