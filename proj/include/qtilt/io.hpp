#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtilt/hmm.hpp"
#include "qtilt/qgen.hpp"
#include "qtilt/sweep.hpp"
#include "qtilt/tilt.hpp"

namespace qtilt {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit digest of a byte string, as fixed-width hex.
std::string fnv1a64_hex(const std::string& bytes);

/// Metadata block carried by tilted-model files.
struct TiltMetadata {
    double beta = 0.0;
    double lambda = 0.0;
    double u = 0.0;
    double hmu_beta = 0.0;
    std::string note;
};

struct LoadedHmm {
    Hmm hmm;
    std::optional<TiltMetadata> metadata;
};

/// Parse a model file:
///   { "name": str, "alphabet": [str], "states": [str],
///     "transitions": [ {"from": str, "to": str, "symbol": str, "p": num} ] }
/// Omitted (from, symbol) pairs mean probability zero; duplicate
/// (from, to, symbol) triples are an error. With repair_rows, rows of the
/// symbol sum are renormalized to 1 instead of being rejected.
/// Throws ParseError with field context on malformed input, and
/// ValidationError when the parsed machine fails its invariants.
LoadedHmm load_hmm(const std::string& path, bool repair_rows = false);

std::string hmm_to_json(const Hmm& hmm, const std::optional<TiltMetadata>& metadata = {});
void save_hmm(const Hmm& hmm, const std::string& path,
              const std::optional<TiltMetadata>& metadata = {});

std::string quantum_machine_to_json(const QuantumMachine& qm, const Hmm& hmm);
void save_quantum_machine(const QuantumMachine& qm, const Hmm& hmm, const std::string& path);

/// CSV with header exactly:  beta,lambda,U,hmu,Cmu,Cq,eta,error
/// Floats in shortest round-trip form; flagged infinities as "inf"; the
/// error column carries per-point failure messages (commas replaced).
std::string sweep_to_csv(const std::vector<SweepRecord>& records);
void save_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path);

/// Reproducibility sidecar written next to every output file.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> input_paths;  // digests computed at write time
    std::string rng_algorithm;             // empty when no randomness used
    std::optional<uint64_t> rng_seed;
    std::vector<std::string> output_paths;
};

std::string manifest_to_json(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace qtilt
