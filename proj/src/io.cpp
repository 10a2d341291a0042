#include "qtilt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qtilt/errors.hpp"
#include "qtilt/version.hpp"

namespace qtilt {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // fold negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fnv1a64_hex(const std::string& bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<uint64_t>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf, 16);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

std::string require_string(const json& j, const char* field, const std::string& ctx) {
    if (!j.contains(field) || !j[field].is_string())
        throw ParseError(ctx + ": missing or non-string field '" + field + "'");
    return j[field].get<std::string>();
}

}  // namespace

LoadedHmm load_hmm(const std::string& path, bool repair_rows) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ParseError("'" + path + "': top level must be an object");

    LoadedHmm out;
    Hmm& hmm = out.hmm;
    hmm.name = doc.value("name", std::string("unnamed"));

    if (!doc.contains("alphabet") || !doc["alphabet"].is_array())
        throw ParseError("'" + path + "': missing 'alphabet' array");
    for (const auto& s : doc["alphabet"]) {
        if (!s.is_string()) throw ParseError("'" + path + "': alphabet entries must be strings");
        hmm.alphabet.symbols.push_back(s.get<std::string>());
    }
    if (!doc.contains("states") || !doc["states"].is_array())
        throw ParseError("'" + path + "': missing 'states' array");
    for (const auto& s : doc["states"]) {
        if (!s.is_string()) throw ParseError("'" + path + "': state entries must be strings");
        hmm.states.push_back(s.get<std::string>());
    }

    const int n = hmm.num_states();
    hmm.t.assign(hmm.alphabet.size(), Matrix(n, n));

    if (!doc.contains("transitions") || !doc["transitions"].is_array())
        throw ParseError("'" + path + "': missing 'transitions' array");
    std::set<std::tuple<int, int, int>> seen;
    int index = 0;
    for (const auto& tr : doc["transitions"]) {
        const std::string ctx = "'" + path + "': transitions[" + std::to_string(index) + "]";
        ++index;
        if (!tr.is_object()) throw ParseError(ctx + " must be an object");
        const std::string from = require_string(tr, "from", ctx);
        const std::string to = require_string(tr, "to", ctx);
        const std::string symbol = require_string(tr, "symbol", ctx);
        if (!tr.contains("p") || !tr["p"].is_number())
            throw ParseError(ctx + ": missing or non-numeric field 'p'");
        const double p = tr["p"].get<double>();

        int i = -1, j = -1;
        for (int k = 0; k < n; ++k) {
            if (hmm.states[k] == from) i = k;
            if (hmm.states[k] == to) j = k;
        }
        const int x = hmm.alphabet.index_of(symbol);
        if (i < 0) throw ParseError(ctx + ": unknown state '" + from + "'");
        if (j < 0) throw ParseError(ctx + ": unknown state '" + to + "'");
        if (x < 0) throw ParseError(ctx + ": unknown symbol '" + symbol + "'");
        if (!seen.insert({i, j, x}).second)
            throw ParseError(ctx + ": duplicate (from, to, symbol) triple");
        hmm.t[x](i, j) = p;
    }

    if (repair_rows) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (const Matrix& m : hmm.t)
                for (int j = 0; j < n; ++j) s += m(i, j);
            if (s > 0.0)
                for (Matrix& m : hmm.t)
                    for (int j = 0; j < n; ++j) m(i, j) /= s;
        }
    }

    if (doc.contains("metadata") && doc["metadata"].is_object()) {
        const json& md = doc["metadata"];
        TiltMetadata tm;
        tm.beta = md.value("beta", 0.0);
        tm.lambda = md.value("lambda", 0.0);
        tm.u = md.value("U", 0.0);
        tm.hmu_beta = md.value("hmu_beta", 0.0);
        tm.note = md.value("note", std::string());
        out.metadata = tm;
    }

    const auto violations = validate(hmm);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "'" << path << "': invalid machine:";
        for (const auto& v : violations) os << " [" << v.invariant << "] " << v.detail << ";";
        throw ValidationError(os.str());
    }
    return out;
}

std::string hmm_to_json(const Hmm& hmm, const std::optional<TiltMetadata>& metadata) {
    json doc;
    doc["name"] = hmm.name;
    doc["alphabet"] = hmm.alphabet.symbols;
    doc["states"] = hmm.states;
    json transitions = json::array();
    for (int x = 0; x < hmm.num_symbols(); ++x)
        for (int i = 0; i < hmm.num_states(); ++i)
            for (int j = 0; j < hmm.num_states(); ++j) {
                const double p = hmm.t[x](i, j);
                if (p == 0.0) continue;
                json tr;
                tr["from"] = hmm.states[i];
                tr["to"] = hmm.states[j];
                tr["symbol"] = hmm.alphabet.symbols[x];
                tr["p"] = p;
                transitions.push_back(tr);
            }
    doc["transitions"] = transitions;
    if (metadata) {
        json md;
        md["beta"] = metadata->beta;
        md["lambda"] = metadata->lambda;
        md["U"] = metadata->u;
        md["hmu_beta"] = metadata->hmu_beta;
        if (!metadata->note.empty()) md["note"] = metadata->note;
        doc["metadata"] = md;
    }
    return doc.dump(2) + "\n";
}

void save_hmm(const Hmm& hmm, const std::string& path,
              const std::optional<TiltMetadata>& metadata) {
    write_file(path, hmm_to_json(hmm, metadata));
}

std::string quantum_machine_to_json(const QuantumMachine& qm, const Hmm& hmm) {
    json doc;
    doc["r"] = qm.signal.r;
    json words = json::array();
    for (const auto& w : qm.signal.words) {
        std::string label;
        for (int x : w) label += hmm.alphabet.symbols[x];
        words.push_back(label);
    }
    doc["words"] = words;
    json kraus = json::array();
    for (size_t x = 0; x < qm.kraus.size(); ++x) {
        json k;
        k["symbol"] = hmm.alphabet.symbols[x];
        k["matrix"] = qm.kraus[x].data();  // row-major, dim x dim
        kraus.push_back(k);
    }
    doc["kraus"] = kraus;
    doc["rho_s"] = qm.rho_s.data();
    doc["cq"] = qm.cq;
    return doc.dump(2) + "\n";
}

void save_quantum_machine(const QuantumMachine& qm, const Hmm& hmm, const std::string& path) {
    write_file(path, quantum_machine_to_json(qm, hmm));
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    os << "beta,lambda,U,hmu,Cmu,Cq,eta,error\n";
    for (const auto& r : records) {
        os << format_double(r.beta) << ',';
        os << format_double(r.lambda) << ',';
        os << format_double(r.u) << ',';
        os << format_double(r.hmu) << ',';
        os << format_double(r.cmu) << ',';
        os << format_double(r.cq) << ',';
        os << (r.eta_infinite ? "inf" : format_double(r.eta)) << ',';
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        os << err << '\n';
    }
    return os.str();
}

void save_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    write_file(path, sweep_to_csv(records));
}

std::string manifest_to_json(const RunManifest& manifest) {
    json doc;
    doc["command"] = manifest.command;
    doc["parameters"] = manifest.parameters;
    json inputs = json::array();
    for (const auto& p : manifest.input_paths) {
        json e;
        e["path"] = p;
        e["fnv1a64"] = fnv1a64_hex(read_file(p));
        inputs.push_back(e);
    }
    doc["inputs"] = inputs;
    json rng;
    rng["algorithm"] = manifest.rng_algorithm.empty() ? "none" : manifest.rng_algorithm;
    if (manifest.rng_seed) rng["seed"] = *manifest.rng_seed;
    doc["rng"] = rng;
    doc["version"] = kVersion;
    doc["outputs"] = manifest.output_paths;
    return doc.dump(2) + "\n";
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    write_file(path, manifest_to_json(manifest));
}

}  // namespace qtilt
