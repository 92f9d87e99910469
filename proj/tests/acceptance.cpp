// End-to-end acceptance suite. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails. Expects PERCONV_CLI_PATH,
// PERCONV_DATA_DIR, and PERCONV_TEST_DATA_DIR from the build.
#include "perconv/dataset.hpp"
#include "perconv/encoder.hpp"
#include "perconv/formula.hpp"
#include "perconv/metrics.hpp"
#include "perconv/model_io.hpp"
#include "perconv/train.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace perconv;
namespace pt = perconv::testing;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail,
            double seconds) {
    if (!ok) ++g_failures;
    std::printf("%s %2d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
}

template <class F>
void checked(int id, const std::string& what, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, ok, what, detail, secs);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(PERCONV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- criterion 1: conv2d vs naive reference ------------------------------

bool conv_oracle(std::string& detail) {
    Rng rng(101);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + rng.below(3), cin = 1 + rng.below(4), cout = 1 + rng.below(5);
        std::size_t h = 3 + rng.below(8), w = 3 + rng.below(10);
        std::size_t kh = 1 + rng.below(std::min<std::size_t>(3, h));
        std::size_t kw = 1 + rng.below(std::min<std::size_t>(4, w));
        std::size_t sh = 1 + rng.below(2), sw = 1 + rng.below(3);
        std::size_t ph = rng.below(kh), pw = rng.below(kw);
        auto x = pt::random_array<double>(Shape{n, cin, h, w}, rng);
        auto wt = pt::random_array<double>(Shape{cout, cin, kh, kw}, rng);
        auto b = pt::random_array<double>(Shape{cout}, rng);

        ad::Tape<double> tape;
        ad::Ref y = ad::conv2d(tape, tape.leaf(x, false), tape.leaf(wt, false),
                               tape.leaf(b, false), sh, sw, ph, pw);
        worst = std::max(worst,
                         pt::max_rel_err(tape.value(y), pt::naive_conv2d(x, wt, b, sh, sw, ph, pw)));
    }
    detail = fmt("max rel err %.2e over 100 configs", worst);
    return worst < 1e-6;
}

// --- criterion 2: periodic layer ----------------------------------------

bool periodic_layer(std::string& detail) {
    Rng rng(202);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + rng.below(2), cin = 1 + rng.below(3), cout = 1 + rng.below(4);
        std::size_t h = 3 + rng.below(7), w = 4 + rng.below(15);
        std::size_t kh = 1 + 2 * rng.below(2), kw = 1 + 2 * rng.below(2);
        auto x = pt::random_array<double>(Shape{n, cin, h, w}, rng);
        auto wt = pt::random_array<double>(Shape{cout, cin, kh, kw}, rng);
        auto b = pt::random_array<double>(Shape{cout}, rng);
        ad::Tape<double> tape;
        ad::Ref y = periodic_conv(tape, tape.leaf(x, false), tape.leaf(wt, false),
                                  tape.leaf(b, false), Periodicity::Cylindrical);
        worst = std::max(worst, pt::max_rel_err(tape.value(y), pt::modular_periodic_conv(x, wt, b)));
    }
    if (worst >= 1e-6) {
        detail = fmt("modular-oracle rel err %.2e", worst);
        return false;
    }

    // circular-shift equivariance through a three-layer stride-1 stack
    auto shift_cols = [](const Array<float>& a, std::size_t k) {
        const std::size_t w = a.shape[3];
        Array<float> out(a.shape);
        const std::size_t rows = a.size() / w;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < w; ++c)
                out.data[r * w + (c + k) % w] = a.data[r * w + c];
        return out;
    };
    auto stack = [&](const Array<float>& x, const std::vector<Array<float>>& ws,
                     const std::vector<Array<float>>& bs) {
        ad::Tape<float> tape;
        ad::Ref r = tape.leaf(x, false);
        for (std::size_t l = 0; l < ws.size(); ++l) {
            r = periodic_conv(tape, r, tape.leaf(ws[l], false), tape.leaf(bs[l], false),
                              Periodicity::Cylindrical);
            r = ad::relu(tape, r);
        }
        return tape.value(r);
    };
    bool exact = true;
    std::vector<Array<float>> ws, bs;
    std::size_t ch = 4;
    for (std::size_t l = 0; l < 3; ++l) {
        std::size_t next = 3 + l;
        ws.push_back(pt::random_array<float>(Shape{next, ch, 3, 3}, rng));
        bs.push_back(pt::random_array<float>(Shape{next}, rng));
        ch = next;
    }
    Array<float> x = pt::random_array<float>(Shape{2, 4, 9, 18}, rng, 0.0, 2.0);
    Array<float> base = stack(x, ws, bs);
    for (std::size_t k : {1u, 5u, 17u}) {
        Array<float> shifted = stack(shift_cols(x, k), ws, bs);
        if (shifted.data != shift_cols(base, k).data) exact = false;
    }
    detail = fmt("modular rel err %.2e", worst) +
             (exact ? ", shift equivariance exact" : ", shift equivariance BROKEN");
    return exact;
}

// --- criterion 3: gradient checks ---------------------------------------

// Central-difference check of d(loss)/d(inputs[i]) for sampled coordinates.
// `build` must reread the current input arrays each call.
double gradcheck(std::vector<Array<double>>& inputs,
                 const std::function<double(ad::Tape<double>*, std::vector<ad::Ref>*)>& build,
                 Rng& rng, std::size_t samples_per_input, double delta = 1e-5) {
    ad::Tape<double> tape;
    std::vector<ad::Ref> refs;
    build(&tape, &refs);
    std::vector<Array<double>> analytic;
    for (ad::Ref r : refs) analytic.push_back(tape.grad(r));

    double worst = 0;
    for (std::size_t p = 0; p < inputs.size(); ++p) {
        std::size_t n = inputs[p].size();
        std::size_t count = std::min(samples_per_input, n);
        for (std::size_t s = 0; s < count; ++s) {
            std::size_t i = samples_per_input >= n ? s : rng.below(n);
            double keep = inputs[p].data[i];
            inputs[p].data[i] = keep + delta;
            double up = build(nullptr, nullptr);
            inputs[p].data[i] = keep - delta;
            double down = build(nullptr, nullptr);
            inputs[p].data[i] = keep;
            double numeric = (up - down) / (2 * delta);
            double denom = std::max({std::abs(numeric), std::abs(analytic[p].data[i]), 1e-4});
            worst = std::max(worst, std::abs(numeric - analytic[p].data[i]) / denom);
        }
    }
    return worst;
}

bool gradient_checks(std::string& detail) {
    Rng rng(303);
    double worst_prim = 0;

    // primitives: conv2d, periodic conv, batch norm, relu/sigmoid, linear,
    // flatten+add, both losses — each as a scalar loss over small tensors
    {
        std::vector<Array<double>> in{pt::random_array<double>(Shape{2, 3, 5, 6}, rng),
                                      pt::random_array<double>(Shape{4, 3, 2, 3}, rng),
                                      pt::random_array<double>(Shape{4}, rng)};
        auto build = [&](ad::Tape<double>* out_tape, std::vector<ad::Ref>* out_refs) {
            ad::Tape<double> tape;
            ad::Ref x = tape.leaf(in[0], true), w = tape.leaf(in[1], true),
                    b = tape.leaf(in[2], true);
            ad::Ref y = ad::conv2d(tape, x, w, b, 1, 2, 1, 1);
            ad::Ref loss = ad::sum(tape, ad::mul(tape, y, y));
            double v = tape.value(loss).data[0];
            tape.backward(loss);
            if (out_tape) {
                *out_tape = std::move(tape);
                *out_refs = {x, w, b};
            }
            return v;
        };
        worst_prim = std::max(worst_prim, gradcheck(in, build, rng, 1000));
    }
    {
        std::vector<Array<double>> in{pt::random_array<double>(Shape{2, 2, 4, 5}, rng),
                                      pt::random_array<double>(Shape{3, 2, 3, 3}, rng),
                                      pt::random_array<double>(Shape{3}, rng)};
        auto build = [&](ad::Tape<double>* out_tape, std::vector<ad::Ref>* out_refs) {
            ad::Tape<double> tape;
            ad::Ref x = tape.leaf(in[0], true), w = tape.leaf(in[1], true),
                    b = tape.leaf(in[2], true);
            ad::Ref y = periodic_conv(tape, x, w, b, Periodicity::Cylindrical);
            y = ad::sigmoid(tape, y);
            ad::Ref loss = ad::sum(tape, y);
            double v = tape.value(loss).data[0];
            tape.backward(loss);
            if (out_tape) {
                *out_tape = std::move(tape);
                *out_refs = {x, w, b};
            }
            return v;
        };
        worst_prim = std::max(worst_prim, gradcheck(in, build, rng, 1000));
    }
    {
        std::vector<Array<double>> in{pt::random_array<double>(Shape{4, 3, 2, 3}, rng),
                                      pt::random_array<double>(Shape{3}, rng, 0.5, 1.5),
                                      pt::random_array<double>(Shape{3}, rng)};
        Array<double> rm = Array<double>::zeros(Shape{3});
        Array<double> rv = Array<double>::full(Shape{3}, 1.0);
        auto build = [&](ad::Tape<double>* out_tape, std::vector<ad::Ref>* out_refs) {
            ad::Tape<double> tape;
            ad::Ref x = tape.leaf(in[0], true), g = tape.leaf(in[1], true),
                    b = tape.leaf(in[2], true);
            ad::Ref y = ad::batch_norm(tape, x, g, b, rm, rv, ad::BnMode::Train);
            y = ad::relu(tape, ad::add(tape, y, x));
            ad::Ref loss = ad::sum(tape, ad::mul(tape, y, y));
            double v = tape.value(loss).data[0];
            tape.backward(loss);
            if (out_tape) {
                *out_tape = std::move(tape);
                *out_refs = {x, g, b};
            }
            return v;
        };
        worst_prim = std::max(worst_prim, gradcheck(in, build, rng, 1000));
    }
    {
        std::vector<Array<double>> in{pt::random_array<double>(Shape{3, 2, 2, 2}, rng),
                                      pt::random_array<double>(Shape{4, 8}, rng),
                                      pt::random_array<double>(Shape{4}, rng)};
        Array<double> target = pt::random_array<double>(Shape{3, 4}, rng, 0.1, 0.9);
        auto build = [&](ad::Tape<double>* out_tape, std::vector<ad::Ref>* out_refs) {
            ad::Tape<double> tape;
            ad::Ref x = tape.leaf(in[0], true), w = tape.leaf(in[1], true),
                    b = tape.leaf(in[2], true);
            ad::Ref y = ad::linear(tape, ad::flatten(tape, x), w, b);
            ad::Ref t = tape.leaf(target, false);
            ad::Ref loss = ad::add(tape, ad::mse_loss(tape, y, t),
                                   ad::bce_with_logits_loss(tape, y, t));
            double v = tape.value(loss).data[0];
            tape.backward(loss);
            if (out_tape) {
                *out_tape = std::move(tape);
                *out_refs = {x, w, b};
            }
            return v;
        };
        worst_prim = std::max(worst_prim, gradcheck(in, build, rng, 1000));
    }

    // one full reduced-scale network, >= 200 sampled parameters
    NetworkConfig cfg = NetworkConfig::make(Task::Regress, Periodicity::Cylindrical,
                                            ScalePreset::Reduced, 404);
    Network<double> net = Network<double>::build(cfg).cast<double>();
    Array<double> x = pt::random_array<double>(Shape{4, 4, 9, 18}, rng, 0.0, 2.0);
    Array<double> y = pt::random_array<double>(Shape{4, 1}, rng, 0.0, 5.0);

    auto forward_loss = [&](std::vector<std::pair<int, ad::Ref>>* refs, ad::Tape<double>* keep) {
        ad::Tape<double> tape;
        ad::Ref pred = net.forward(tape, tape.leaf(x, false), ad::BnMode::Train, refs);
        ad::Ref loss = ad::mse_loss(tape, pred, tape.leaf(y, false));
        double v = tape.value(loss).data[0];
        if (keep) {
            tape.backward(loss);
            *keep = std::move(tape);
        }
        return v;
    };
    ad::Tape<double> tape;
    std::vector<std::pair<int, ad::Ref>> refs;
    forward_loss(&refs, &tape);

    double worst_net = 0;
    std::size_t checked_params = 0;
    const double delta = 1e-5;
    auto central = [&](Array<double>& p, std::size_t i, double d) {
        double keep = p.data[i];
        p.data[i] = keep + d;
        double up = forward_loss(nullptr, nullptr);
        p.data[i] = keep - d;
        double down = forward_loss(nullptr, nullptr);
        p.data[i] = keep;
        return (up - down) / (2 * d);
    };
    for (std::size_t attempt = 0; checked_params < 220 && attempt < 2000; ++attempt) {
        auto [idx, ref] = refs[rng.below(refs.size())];
        Array<double>& p = net.entries[idx].value;
        std::size_t i = rng.below(p.size());
        double fd1 = central(p, i, delta);
        double fd2 = central(p, i, delta / 2);
        // a ReLU kink inside the step window makes the two estimates
        // disagree at O(1); the loss is not differentiable there, so skip
        if (std::abs(fd1 - fd2) > 1e-4 + 1e-2 * std::abs(fd2)) continue;
        double analytic = tape.grad(ref).data[i];
        double denom = std::max({std::abs(fd2), std::abs(analytic), 1e-4});
        worst_net = std::max(worst_net, std::abs(fd2 - analytic) / denom);
        ++checked_params;
    }
    if (checked_params < 200) {
        detail = "only " + std::to_string(checked_params) + " differentiable samples found";
        return false;
    }
    detail = fmt("primitive max rel err %.2e", worst_prim) +
             fmt(", network max rel err %.2e", worst_net) + " over " +
             std::to_string(checked_params) + " sampled parameters";
    return worst_prim < 1e-3 && worst_net < 1e-3;
}

// --- criterion 4: encoding fidelity -------------------------------------

bool encoding_fidelity(std::string& detail) {
    Composition h2o = parse_formula("H2O");
    if (h2o.entries.size() != 2 || h2o.entries.at("H") != 2.0 || h2o.entries.at("O") != 1.0) {
        detail = "H2O did not parse as {H:2, O:1}";
        return false;
    }
    TableTensor t = encode(h2o);
    if (t.at(0, 0, 0) != 2.0 || t.at(1, 1, 15) != 1.0) {
        detail = "H2O tensor placement wrong";
        return false;
    }

    std::vector<CsvDiagnostic> diags;
    auto records = load_csv(std::string(PERCONV_DATA_DIR) + "/synthetic_gapped.csv", {}, &diags);
    std::size_t checked_count = 0;
    for (const auto& rec : records) {
        Composition c = parse_formula(rec.composition_text);
        Composition back = decode(encode(c));
        if (back.entries.size() != c.entries.size()) {
            detail = "decode(encode(.)) changed the element set for " + rec.composition_text;
            return false;
        }
        for (const auto& [sym, cnt] : c.entries) {
            auto it = back.entries.find(sym);
            if (it == back.entries.end() || std::abs(it->second - cnt) > 1e-12) {
                detail = "decode(encode(.)) lost " + sym + " in " + rec.composition_text;
                return false;
            }
        }
        ++checked_count;
    }
    detail = "H2O={H:2,O:1}; round trip on " + std::to_string(checked_count) + " formulas";
    return checked_count >= 2000;
}

// --- criterion 5: overfit sanity ----------------------------------------

bool overfit_sanity(std::string& detail) {
    std::vector<SampleRecord> recs{
        {"H2O", 4.1, {}},   {"NaCl", 5.2, {}},  {"SiO2", 6.3, {}},  {"MgO", 5.4, {}},
        {"Fe2O3", 1.5, {}}, {"TiO2", 2.6, {}},  {"ZnO", 3.2, {}},   {"GaAs", 1.4, {}},
        {"CdTe", 1.5, {}},  {"CuO", 1.2, {}},   {"SnO2", 3.6, {}},  {"Al2O3", 6.9, {}},
        {"KCl", 6.2, {}},   {"CaF2", 8.1, {}},  {"BaTiO3", 3.1, {}}, {"LiF", 9.0, {}},
    };
    SplitDataset d;
    for (const auto& r : recs) d.train.push_back(encode_record(r, Representation::Absolute));

    NetworkConfig ncfg = NetworkConfig::make(Task::Regress, Periodicity::Cylindrical,
                                             ScalePreset::Reduced, 7);
    Network<float> net = Network<float>::build(ncfg);
    TrainConfig tcfg;
    tcfg.task = Task::Regress;
    tcfg.batch_size = 16; // one step per epoch
    tcfg.lr = 3e-3;
    tcfg.epochs = 500;
    tcfg.seed = 1;
    auto result = train(net, d, tcfg);

    int first_below = -1;
    for (const auto& rec : result.history)
        if (rec.train_loss < 1e-2) {
            first_below = rec.epoch;
            break;
        }
    detail = first_below > 0
                 ? "train loss < 1e-2 after " + std::to_string(first_below) + " steps"
                 : fmt("final train loss %.3g after 500 steps", result.history.back().train_loss);
    return first_below > 0;
}

// --- criteria 6/7: desk-scale training ----------------------------------

bool desk_classification(std::string& detail) {
    auto gapped = load_csv(std::string(PERCONV_DATA_DIR) + "/synthetic_gapped.csv");
    auto metals = load_csv(std::string(PERCONV_DATA_DIR) + "/synthetic_nongapped.csv");
    // keep the run inside the half-hour budget while staying >= 2000 total
    gapped.resize(std::min<std::size_t>(gapped.size(), 1150));
    metals.resize(std::min<std::size_t>(metals.size(), 1150));
    ClassBalanceStats stats;
    auto records = prepare_classification(gapped, metals, 42, &stats);
    if (records.size() < 2000) {
        detail = "only " + std::to_string(records.size()) + " balanced samples";
        return false;
    }
    SplitDataset data = split(records, 42);

    NetworkConfig ncfg = NetworkConfig::make(Task::Classify, Periodicity::Cylindrical,
                                             ScalePreset::Reduced, 42);
    Network<float> net = Network<float>::build(ncfg);
    TrainConfig tcfg;
    tcfg.task = Task::Classify;
    tcfg.epochs = 30;
    tcfg.lr = 1e-3;
    tcfg.batch_size = 32;
    tcfg.seed = 42;
    auto result = train(net, data, tcfg);
    const auto& rep = *result.history.back().classification;
    double auc = rep.auc ? *rep.auc : 0.0;
    detail = fmt("test AUC %.3f", auc) + fmt(", accuracy %.3f", rep.accuracy) + " on " +
             std::to_string(records.size()) + " balanced samples";
    return auc >= 0.85 && rep.accuracy >= 0.78;
}

bool desk_regression(std::string& detail) {
    auto gapped = load_csv(std::string(PERCONV_DATA_DIR) + "/synthetic_gapped.csv");
    std::vector<SampleRecord> experimental;
    for (const auto& r : gapped)
        if (r.source == SampleSource::Experimental) experimental.push_back(r);
    experimental.resize(std::min<std::size_t>(experimental.size(), 2400));
    auto records = prepare_regression(experimental);
    SplitDataset data = split(records, 43);

    NetworkConfig ncfg = NetworkConfig::make(Task::Regress, Periodicity::Cylindrical,
                                             ScalePreset::Reduced, 43);
    Network<float> net = Network<float>::build(ncfg);
    TrainConfig tcfg;
    tcfg.task = Task::Regress;
    tcfg.epochs = 30;
    tcfg.lr = 1e-3;
    tcfg.batch_size = 32;
    tcfg.seed = 43;
    auto result = train(net, data, tcfg);
    const auto& rep = *result.history.back().regression;
    detail = fmt("test R^2 %.3f", rep.r_squared) + fmt(", RMSE %.3f eV", rep.rmse) + " on " +
             std::to_string(records.size()) + " samples";
    return rep.r_squared >= 0.6 && rep.rmse <= 1.0;
}

// --- criterion 8: ablation harness --------------------------------------

bool ablation_harness(std::string& detail) {
    auto on = Network<float>::build(
        NetworkConfig::make(Task::Classify, Periodicity::Cylindrical, ScalePreset::Reduced, 9));
    auto off = Network<float>::build(
        NetworkConfig::make(Task::Classify, Periodicity::Flat, ScalePreset::Reduced, 9));
    if (on.parameter_count() != off.parameter_count()) {
        detail = "parameter counts differ: " + std::to_string(on.parameter_count()) + " vs " +
                 std::to_string(off.parameter_count());
        return false;
    }

    std::string data = std::string(PERCONV_DATA_DIR) + "/sample_gapped.csv";
    std::string neg = std::string(PERCONV_DATA_DIR) + "/sample_nongapped.csv";
    int rc = run_cli("--seed 9 --quiet train --task classify --data " + data + " --negatives " +
                     neg + " --epochs 1 --scale reduced --periodicity off --model-out "
                     "acceptance_ablation.model");
    std::remove("acceptance_ablation.model");
    if (rc != 0) {
        detail = "--periodicity off CLI run failed";
        return false;
    }
    detail = std::to_string(on.parameter_count()) +
             " trainable parameters in both variants; off-mode CLI run succeeded";
    return true;
}

// --- criterion 9: metrics cross-validation ------------------------------

bool metrics_cross_validation(std::string& detail) {
    Rng rng(909);
    double worst_auc = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 6 + rng.below(50);
        std::vector<double> scores;
        std::vector<int> labels;
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores.push_back(rng.below(9) / 8.0); // grid scores force ties
            int l = rng.below(2) ? 1 : 0;
            labels.push_back(l);
            (l ? pos : neg) = true;
        }
        if (!pos || !neg) {
            --trial;
            continue;
        }
        auto rep = classification_metrics(scores, labels);
        double area = 0;
        for (std::size_t i = 1; i < rep.roc_points.size(); ++i)
            area += (rep.roc_points[i].first - rep.roc_points[i - 1].first) *
                    (rep.roc_points[i].second + rep.roc_points[i - 1].second) / 2.0;
        worst_auc = std::max(worst_auc, std::abs(*rep.auc - area));
    }

    double worst_reg = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 3 + rng.below(40);
        std::vector<double> preds, targets;
        for (std::size_t i = 0; i < n; ++i) {
            preds.push_back(rng.uniform(-2, 8));
            targets.push_back(rng.uniform(-2, 8));
        }
        double mean = 0;
        for (double t : targets) mean += t / n;
        double ss_res = 0, ss_tot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            ss_res += (preds[i] - targets[i]) * (preds[i] - targets[i]);
            ss_tot += (targets[i] - mean) * (targets[i] - mean);
        }
        auto rep = regression_metrics(preds, targets);
        worst_reg = std::max(worst_reg, std::abs(rep.rmse - std::sqrt(ss_res / n)));
        worst_reg = std::max(worst_reg, std::abs(rep.r_squared - (1.0 - ss_res / ss_tot)));
    }
    detail = fmt("rank-vs-trapezoid AUC gap %.1e", worst_auc) +
             fmt(", regression oracle gap %.1e", worst_reg);
    return worst_auc < 1e-12 && worst_reg < 1e-9;
}

// --- criterion 10: determinism ------------------------------------------

bool determinism(std::string& detail) {
    std::string data = std::string(PERCONV_DATA_DIR) + "/sample_gapped.csv";
    std::string neg = std::string(PERCONV_DATA_DIR) + "/sample_nongapped.csv";
    std::string common = "--seed 17 --quiet train --task classify --data " + data +
                         " --negatives " + neg +
                         " --epochs 2 --scale reduced --model-out ";
    if (run_cli(common + "acceptance_det_a.model") != 0 ||
        run_cli(common + "acceptance_det_b.model") != 0) {
        detail = "seeded CLI training run failed";
        return false;
    }
    std::string a = read_bytes("acceptance_det_a.model");
    std::string b = read_bytes("acceptance_det_b.model");
    std::remove("acceptance_det_a.model");
    std::remove("acceptance_det_b.model");
    if (a.empty() || a != b) {
        detail = "model files differ (" + std::to_string(a.size()) + " vs " +
                 std::to_string(b.size()) + " bytes)";
        return false;
    }
    detail = "two seeded runs wrote byte-identical " + std::to_string(a.size()) + "-byte models";
    return true;
}

} // namespace

int main() {
    checked(1, "conv2d matches the nested-loop reference", conv_oracle);
    checked(2, "periodic conv matches modular indexing and is shift equivariant", periodic_layer);
    checked(3, "finite-difference gradient checks", gradient_checks);
    checked(4, "encode/decode identity and H2O placement", encoding_fidelity);
    checked(5, "reduced net overfits 16 samples", overfit_sanity);
    checked(6, "desk-scale classification quality", desk_classification);
    checked(7, "desk-scale regression quality", desk_regression);
    checked(8, "flat-padding ablation with matched parameter count", ablation_harness);
    checked(9, "AUC and regression metrics against oracles", metrics_cross_validation);
    checked(10, "byte-identical models from identical seeds", determinism);
    if (g_failures) std::printf("%d acceptance check(s) FAILED\n", g_failures);
    else std::printf("all acceptance checks passed\n");
    return g_failures ? 1 : 0;
}
