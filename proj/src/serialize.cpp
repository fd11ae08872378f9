#include "combclassic/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace combclassic {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& pointer) {
    if (!j.is_object()) throw SchemaError(pointer.empty() ? "/" : pointer, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(pointer + "/" + key, "missing field");
    return *it;
}

template <typename T>
T value(const Json& j, const std::string& key, const std::string& pointer) {
    const Json& v = field(j, key, pointer);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(pointer + "/" + key, e.what());
    }
}

void check_header(const Json& j, const std::string& kind) {
    if (value<std::string>(j, "schema", "") != kSchemaVersion) throw SchemaError("/schema", "unsupported schema version");
    if (value<std::string>(j, "kind", "") != kind) throw SchemaError("/kind", "expected kind " + kind);
}

Json header(const std::string& kind) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

const char* port_name(Port p) {
    switch (p) {
        case Port::in: return "in";
        case Port::out: return "out";
        case Port::none: return "none";
    }
    return "none";
}

Json map_to_json(const ChoiState& m) {
    Json j;
    j["layout"] = layout_to_json(m.layout);
    j["choi"] = matrix_to_json(m.matrix);
    return j;
}

ChoiState map_from_json(const Json& j, const std::string& pointer) {
    ChoiState m;
    m.layout = layout_from_json(field(j, "layout", pointer), pointer + "/layout");
    m.matrix = matrix_from_json(field(j, "choi", pointer), pointer + "/choi");
    try {
        m.layout.validate(m.matrix.rows());
    } catch (const LayoutMismatch& e) {
        throw SchemaError(pointer + "/layout", e.what());
    }
    return m;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json data = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
    j["data"] = std::move(data);
    return j;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer) {
    const auto rows = value<Index>(j, "rows", pointer);
    const auto cols = value<Index>(j, "cols", pointer);
    if (rows < 0 || cols < 0) throw SchemaError(pointer + "/rows", "negative shape");
    const Json& data = field(j, "data", pointer);
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
        throw SchemaError(pointer + "/data", "expected rows*cols entries");
    ComplexMatrix m(rows, cols);
    for (Index k = 0; k < rows * cols; ++k) {
        const Json& e = data[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw SchemaError(pointer + "/data/" + std::to_string(k), "expected [re, im]");
        m(k / cols, k % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

Json layout_to_json(const FactorLayout& l) {
    Json dims = Json::array(), slots = Json::array(), ports = Json::array();
    for (const auto& f : l.factors) {
        dims.push_back(f.dim);
        slots.push_back(f.slot);
        ports.push_back(port_name(f.port));
    }
    Json j;
    j["dims"] = std::move(dims);
    j["slots"] = std::move(slots);
    j["ports"] = std::move(ports);
    return j;
}

FactorLayout layout_from_json(const Json& j, const std::string& pointer) {
    const auto dims = value<std::vector<Index>>(j, "dims", pointer);
    const auto slots = value<std::vector<int>>(j, "slots", pointer);
    const auto ports = value<std::vector<std::string>>(j, "ports", pointer);
    if (slots.size() != dims.size()) throw SchemaError(pointer + "/slots", "length differs from dims");
    if (ports.size() != dims.size()) throw SchemaError(pointer + "/ports", "length differs from dims");
    FactorLayout l;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        Port p;
        if (ports[k] == "in") p = Port::in;
        else if (ports[k] == "out") p = Port::out;
        else if (ports[k] == "none") p = Port::none;
        else throw SchemaError(pointer + "/ports/" + std::to_string(k), "unknown port " + ports[k]);
        if (dims[k] < 1) throw SchemaError(pointer + "/dims/" + std::to_string(k), "dimension must be positive");
        l.factors.push_back({dims[k], slots[k], p});
    }
    return l;
}

Json to_json(const Comb& c) {
    Json j = header("comb");
    j["system_dim"] = c.system_dim;
    j["slots"] = c.slots();
    j["times"] = c.times;
    j["relaxed"] = c.relaxed;
    j["layout"] = layout_to_json(c.layout);
    j["choi"] = matrix_to_json(c.choi);
    return j;
}

Comb comb_from_json(const Json& j) {
    check_header(j, "comb");
    Comb c;
    c.system_dim = value<Index>(j, "system_dim", "");
    c.times = value<std::vector<double>>(j, "times", "");
    c.relaxed = value<bool>(j, "relaxed", "");
    c.layout = layout_from_json(field(j, "layout", ""), "/layout");
    c.choi = matrix_from_json(field(j, "choi", ""), "/choi");
    try {
        c.layout.validate(c.choi.rows());
    } catch (const LayoutMismatch& e) {
        throw SchemaError("/layout", e.what());
    }
    if (c.choi.rows() != c.choi.cols()) throw SchemaError("/choi", "comb must be square");
    if (c.layout.size() % 2 != 0) throw SchemaError("/layout/dims", "comb needs an (out, in) pair per slot");
    for (const auto& f : c.layout.factors)
        if (f.dim != c.system_dim) throw SchemaError("/layout/dims", "every port must carry the system dimension");
    if (value<int>(j, "slots", "") != c.slots()) throw SchemaError("/slots", "disagrees with the layout");
    return c;
}

Json to_json(const Dilation& d) {
    Json j = header("dilation");
    j["system_dim"] = d.system_dim;
    j["env_dims"] = d.env_dims;
    j["times"] = d.times;
    j["initial_state"] = matrix_to_json(d.initial_state);
    Json maps = Json::array();
    for (const auto& m : d.maps) maps.push_back(map_to_json(m));
    j["maps"] = std::move(maps);
    return j;
}

Dilation dilation_from_json(const Json& j) {
    check_header(j, "dilation");
    Dilation d;
    d.system_dim = value<Index>(j, "system_dim", "");
    d.env_dims = value<std::vector<Index>>(j, "env_dims", "");
    d.times = value<std::vector<double>>(j, "times", "");
    d.initial_state = matrix_from_json(field(j, "initial_state", ""), "/initial_state");
    const Json& maps = field(j, "maps", "");
    if (!maps.is_array()) throw SchemaError("/maps", "expected an array");
    for (std::size_t k = 0; k < maps.size(); ++k) d.maps.push_back(map_from_json(maps[k], "/maps/" + std::to_string(k)));
    return d;
}

Json to_json(const Instrument& inst) {
    Json j = header("instrument");
    j["dim"] = inst.dim;
    j["labels"] = inst.labels;
    Json el = Json::array();
    for (const auto& e : inst.elements) el.push_back(map_to_json(e));
    j["elements"] = std::move(el);
    return j;
}

Instrument instrument_from_json(const Json& j) {
    check_header(j, "instrument");
    Instrument inst;
    inst.dim = value<Index>(j, "dim", "");
    inst.labels = value<std::vector<std::string>>(j, "labels", "");
    const Json& el = field(j, "elements", "");
    if (!el.is_array() || el.empty()) throw SchemaError("/elements", "expected a nonempty array");
    for (std::size_t k = 0; k < el.size(); ++k) {
        const std::string ptr = "/elements/" + std::to_string(k);
        inst.elements.push_back(map_from_json(el[k], ptr));
        if (inst.elements.back().dim() != inst.dim * inst.dim) throw SchemaError(ptr + "/choi", "element dimension");
    }
    if (!inst.labels.empty() && inst.labels.size() != inst.elements.size())
        throw SchemaError("/labels", "one label per element");
    return inst;
}

Json to_json(const ProbTable& t) {
    Json j = header("prob_table");
    j["slots"] = t.slots;
    j["alphabet"] = t.alphabet;
    j["probs"] = t.probs;
    return j;
}

Json report_json(const ClassicalityReport& r) {
    Json j = header("kolmogorov_report");
    j["pass"] = r.pass;
    j["worst_violation"] = r.worst_violation;
    j["tol"] = r.tol;
    Json w;
    w["subset"] = r.witness.subset;
    w["dropped_slot"] = r.witness.dropped_slot;
    w["outcome"] = r.witness.outcome;
    j["witness"] = std::move(w);
    return j;
}

Json report_json(const MarkovReport& r) {
    Json j = header("markov_report");
    j["pass"] = r.pass;
    j["worst_violation"] = r.worst_violation;
    j["conditioning_floor"] = kConditioningFloor;
    j["skipped_events"] = r.skipped.size();
    return j;
}

Json report_json(const NcgdReport& r, double tol) {
    Json j = header("dephasing_sandwich_report");
    j["pass"] = r.pass;
    j["worst_violation"] = r.worst_violation;
    j["worst_pair"] = r.worst_pair;
    j["tol"] = tol;
    return j;
}

Json report_json(const ChiReport& r, double tol) {
    Json j = header("chi_report");
    j["pass"] = r.pass;
    j["worst_violation"] = r.worst_violation;
    j["subset"] = r.subset;
    j["outcome"] = r.outcome;
    j["tol"] = tol;
    return j;
}

Json report_json(const CausalityReport& r, double tol) {
    Json j = header("causality_report");
    j["pass"] = r.pass;
    j["psd"] = r.psd;
    j["normalized"] = r.normalized;
    j["hierarchy"] = r.hierarchy;
    j["relaxed"] = r.relaxed;
    j["normalization_error"] = r.normalization_error;
    j["residuals"] = r.residuals;
    j["tol"] = tol;
    return j;
}

Json report_json(const MeasureResult& r) {
    Json j = header("measure_report");
    j["M"] = r.M;
    j["P_B"] = r.P_B;
    j["primal"] = r.primal;
    j["dual"] = r.dual ? Json(*r.dual) : Json(nullptr);
    j["gap"] = r.gap ? Json(*r.gap) : Json(nullptr);
    j["upper_bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
    j["pivots"] = r.iterations;
    j["cap"] = r.cap;
    j["classical_model"] = std::vector<double>(r.classical_model.data(), r.classical_model.data() + r.classical_model.size());
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("/", "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("/", e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace combclassic
