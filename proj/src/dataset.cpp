#include "perconv/dataset.hpp"

#include "perconv/errors.hpp"
#include "perconv/formula.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

namespace perconv {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

SampleSource parse_source(const std::string& s) {
    if (s == "experimental") return SampleSource::Experimental;
    if (s == "computed") return SampleSource::Computed;
    throw DataError("unknown source tag: " + s);
}

// Uniform subsample of k indices out of n, in stable order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    rng.shuffle(idx);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

std::vector<SampleRecord> load_csv(const std::string& path, const CsvLoadOptions& opts,
                                   std::vector<CsvDiagnostic>* diagnostics) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::vector<SampleRecord> records;
    std::vector<CsvDiagnostic> local;
    std::vector<CsvDiagnostic>& diags = diagnostics ? *diagnostics : local;

    std::string line;
    std::size_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line != "composition,target" && line != "composition,target,source")
                throw DataError(path + ": expected header `composition,target[,source]`");
            continue;
        }
        auto fields = split_fields(line);
        try {
            if (fields.size() < 2 || fields.size() > 3)
                throw DataError("expected 2 or 3 fields");
            SampleRecord rec;
            rec.composition_text = fields[0];
            parse_formula(rec.composition_text); // validate
            char* end = nullptr;
            rec.target = std::strtod(fields[1].c_str(), &end);
            if (end == fields[1].c_str() || *end != '\0')
                throw DataError("malformed target: " + fields[1]);
            if (fields.size() == 3) rec.source = parse_source(fields[2]);
            records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            diags.push_back({lineno, e.what()});
        }
    }
    if (!diags.empty() && !opts.skip_bad) {
        std::string msg = path + ": " + std::to_string(diags.size()) + " bad line(s); first at line " +
                          std::to_string(diags.front().line) + ": " + diags.front().reason;
        throw DataError(msg);
    }
    return records;
}

std::string ClassBalanceStats::to_json() const {
    nlohmann::json j{{"gapped_in", gapped_in},
                     {"nongapped_in", nongapped_in},
                     {"gapped_unique", gapped_unique},
                     {"nongapped_unique", nongapped_unique},
                     {"gapped_duplicates_removed", gapped_in - gapped_unique},
                     {"nongapped_duplicates_removed", nongapped_in - nongapped_unique},
                     {"per_class", per_class}};
    return j.dump();
}

namespace {

// First occurrence wins; key is the normalized composition.
std::vector<SampleRecord> dedup(const std::vector<SampleRecord>& in) {
    std::vector<SampleRecord> out;
    std::unordered_set<std::string> seen;
    for (const auto& rec : in)
        if (seen.insert(parse_formula(rec.composition_text).key()).second) out.push_back(rec);
    return out;
}

} // namespace

std::vector<SampleRecord> prepare_classification(const std::vector<SampleRecord>& gapped,
                                                 const std::vector<SampleRecord>& nongapped,
                                                 std::uint64_t seed, ClassBalanceStats* stats) {
    if (gapped.empty() || nongapped.empty())
        throw DataError("classification needs both classes non-empty");
    std::vector<SampleRecord> pos = dedup(gapped);
    std::vector<SampleRecord> neg = dedup(nongapped);
    Rng rng(seed);
    std::size_t k = std::min(pos.size(), neg.size());
    auto subsample = [&](std::vector<SampleRecord>& v) {
        if (v.size() == k) return;
        auto idx = sample_indices(v.size(), k, rng);
        std::vector<SampleRecord> kept;
        kept.reserve(k);
        for (std::size_t i : idx) kept.push_back(v[i]);
        v = std::move(kept);
    };
    subsample(pos);
    subsample(neg);
    if (stats) {
        stats->gapped_in = gapped.size();
        stats->nongapped_in = nongapped.size();
        stats->gapped_unique = dedup(gapped).size();
        stats->nongapped_unique = dedup(nongapped).size();
        stats->per_class = k;
    }
    std::vector<SampleRecord> out;
    out.reserve(2 * k);
    for (auto& r : pos) {
        r.target = 1.0;
        out.push_back(std::move(r));
    }
    for (auto& r : neg) {
        r.target = 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SampleRecord> prepare_regression(const std::vector<SampleRecord>& gapped) {
    if (gapped.empty()) throw DataError("regression dataset is empty");
    return gapped;
}

EncodedSample encode_record(const SampleRecord& rec, Representation repr) {
    Composition c = parse_formula(rec.composition_text);
    if (repr == Representation::Relative) c = to_relative(c);
    TableTensor t = encode(c);
    EncodedSample s;
    s.input = Array<float>(Shape{TableTensor::kChannels, (std::size_t)kGridRows,
                                 (std::size_t)kGridCols});
    for (std::size_t i = 0; i < t.data.size(); ++i) s.input.data[i] = static_cast<float>(t.data[i]);
    s.target = static_cast<float>(rec.target);
    return s;
}

SplitDataset split(const std::vector<SampleRecord>& records, std::uint64_t seed,
                   Representation repr) {
    if (records.size() < 5) throw DataError("need at least 5 records to split");
    std::vector<std::size_t> idx(records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed);
    rng.shuffle(idx);
    std::size_t n_train = (records.size() * 8 + 5) / 10;
    SplitDataset out;
    out.seed = seed;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto& dst = i < n_train ? out.train : out.test;
        dst.push_back(encode_record(records[idx[i]], repr));
    }
    return out;
}

std::pair<Array<float>, Array<float>> make_batch(const std::vector<EncodedSample>& samples,
                                                 std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    const std::size_t per = TableTensor::kSize;
    Array<float> x(Shape{n, TableTensor::kChannels, (std::size_t)kGridRows, (std::size_t)kGridCols});
    Array<float> y(Shape{n, 1});
    for (std::size_t i = 0; i < n; ++i) {
        const EncodedSample& s = samples[begin + i];
        std::copy(s.input.data.begin(), s.input.data.end(), x.data.begin() + i * per);
        y.data[i] = s.target;
    }
    return {std::move(x), std::move(y)};
}

} // namespace perconv
