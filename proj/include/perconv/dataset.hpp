#pragma once

#include "perconv/encoder.hpp"
#include "perconv/nn.hpp"
#include "perconv/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace perconv {

enum class SampleSource { Experimental, Computed, Unspecified };

struct SampleRecord {
    std::string composition_text;
    double target = 0.0; // Classify: 1 gapped / 0 metal; Regress: gap in eV
    SampleSource source = SampleSource::Unspecified;
};

struct CsvLoadOptions {
    bool skip_bad = false;
};

struct CsvDiagnostic {
    std::size_t line = 0;
    std::string reason;
};

// Header `composition,target[,source]`. Formulas are validated by the
// parser; with skip_bad, bad lines are reported and dropped instead of
// aborting. Throws DataError when any line fails and skip_bad is off.
std::vector<SampleRecord> load_csv(const std::string& path, const CsvLoadOptions& opts = {},
                                   std::vector<CsvDiagnostic>* diagnostics = nullptr);

struct ClassBalanceStats {
    std::size_t gapped_in = 0, nongapped_in = 0;
    std::size_t gapped_unique = 0, nongapped_unique = 0;
    std::size_t per_class = 0;
    std::string to_json() const;
};

// Deduplicates each class on the normalized composition (so "OH2" and
// "H2O" collapse), then subsamples the larger class with the seeded
// generator so the counts match. Labels 1 (gapped) / 0 (non-gapped).
std::vector<SampleRecord> prepare_classification(const std::vector<SampleRecord>& gapped,
                                                 const std::vector<SampleRecord>& nongapped,
                                                 std::uint64_t seed,
                                                 ClassBalanceStats* stats = nullptr);

// Regression keeps every record, duplicates included.
std::vector<SampleRecord> prepare_regression(const std::vector<SampleRecord>& gapped);

struct EncodedSample {
    Array<float> input; // [4,9,18]
    float target = 0.0f;
};

struct SplitDataset {
    std::vector<EncodedSample> train;
    std::vector<EncodedSample> test;
    std::uint64_t seed = 0;
};

// Seeded uniform shuffle, then 80/20 prefix/suffix split, encoding each
// record with the requested representation. Requires >= 5 records.
SplitDataset split(const std::vector<SampleRecord>& records, std::uint64_t seed,
                   Representation repr = Representation::Absolute);

EncodedSample encode_record(const SampleRecord& rec, Representation repr);

// Assembles samples [begin, end) into one batch: input [N,4,9,18],
// target [N,1].
std::pair<Array<float>, Array<float>> make_batch(const std::vector<EncodedSample>& samples,
                                                 std::size_t begin, std::size_t end);

} // namespace perconv
