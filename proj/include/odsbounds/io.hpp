#pragma once
// Serialization: a deterministic JSON emitter (sorted keys, fixed 10
// significant digit floats, no locale), a small CSV writer, and the input
// document schema shared by the command-line tools. Input parsing is handled
// by the vendored nlohmann parser; output is always emitted by the
// deterministic writer so reruns are byte-identical.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "odsbounds/bounds.hpp"
#include "odsbounds/common.hpp"
#include "odsbounds/prob_model.hpp"

namespace odsbounds {

class JsonValue {
 public:
  using Object = std::map<std::string, JsonValue>;
  using Array = std::vector<JsonValue>;

  JsonValue() = default;
  JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
  JsonValue(double d) : kind_(Kind::Double), num_(d) {}
  JsonValue(int i) : kind_(Kind::Int), int_(i) {}
  JsonValue(std::int64_t i) : kind_(Kind::Int), int_(i) {}
  JsonValue(std::uint64_t i) : kind_(Kind::Int), int_(static_cast<std::int64_t>(i)) {}
  JsonValue(const char* s) : kind_(Kind::String), str_(s) {}
  JsonValue(std::string s) : kind_(Kind::String), str_(std::move(s)) {}

  static JsonValue object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
  }
  static JsonValue array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
  }

  JsonValue& operator[](const std::string& key) {
    if (kind_ == Kind::Null) kind_ = Kind::Object;
    if (kind_ != Kind::Object) throw std::runtime_error("json: not an object");
    return obj_[key];
  }

  void push_back(JsonValue v) {
    if (kind_ == Kind::Null) kind_ = Kind::Array;
    if (kind_ != Kind::Array) throw std::runtime_error("json: not an array");
    arr_.push_back(std::move(v));
  }

  bool is_null() const { return kind_ == Kind::Null; }

  std::string dump() const {
    std::string out;
    write(out, 0);
    out += "\n";
    return out;
  }

 private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  static void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out, int depth) const {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (kind_) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += bool_ ? "true" : "false"; break;
      case Kind::Int: out += std::to_string(int_); break;
      case Kind::Double:
        if (std::isnan(num_) || std::isinf(num_)) out += "null";
        else out += fmt_g10(num_);
        break;
      case Kind::String: escape(out, str_); break;
      case Kind::Array:
        if (arr_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < arr_.size(); ++i) {
          out += pad_in;
          arr_[i].write(out, depth + 1);
          if (i + 1 < arr_.size()) out += ",";
          out += "\n";
        }
        out += pad + "]";
        break;
      case Kind::Object:
        if (obj_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        {
          std::size_t i = 0;
          for (const auto& [k, v] : obj_) {
            out += pad_in;
            escape(out, k);
            out += ": ";
            v.write(out, depth + 1);
            if (++i < obj_.size()) out += ",";
            out += "\n";
          }
        }
        out += pad + "}";
        break;
    }
  }

  Kind kind_ = Kind::Null;
  bool bool_ = false;
  double num_ = 0.0;
  std::int64_t int_ = 0;
  std::string str_;
  Array arr_;
  Object obj_;  // std::map iterates keys in sorted order
};

// --------------------------------------------------------------------------
// CSV

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { add_row(header); }

  void add_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ += ",";
      out_ += csv_field(fields[i]);
    }
    out_ += "\n";
  }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

// --------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// --------------------------------------------------------------------------
// Input documents

struct InputDocument {
  int schema_version = 1;
  std::optional<SampleCounts> counts;
  std::optional<ConditionalCellTable> prob;
  std::optional<ConditionalCellTableIV> prob_iv;
  std::optional<double> r;
  std::optional<std::uint64_t> cohort;
  std::optional<double> p_z1;
  std::optional<std::array<double, 2>> sel_given_y;
  std::vector<SettingTag> settings;
};

namespace detail {

inline std::array<double, 4> parse_cells(const nlohmann::json& cells) {
  if (!cells.is_object()) throw validation_error("input: cells must be an object with p00,p01,p10,p11");
  std::array<double, 4> out{};
  const char* names[4] = {"p00", "p01", "p10", "p11"};
  for (int i = 0; i < 4; ++i) {
    if (!cells.contains(names[i]) || !cells[names[i]].is_number())
      throw validation_error(std::string("input: missing or non-numeric cell ") + names[i]);
    out[static_cast<std::size_t>(i)] = cells[names[i]].get<double>();
  }
  return out;
}

}  // namespace detail

inline InputDocument parse_input_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw validation_error(std::string("input: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw validation_error("input: top level must be an object");
  InputDocument doc;
  if (j.contains("schema_version")) doc.schema_version = j["schema_version"].get<int>();
  if (doc.schema_version != 1) throw validation_error("input: unsupported schema_version");
  if (!j.contains("data") || !j["data"].is_object()) throw validation_error("input: missing data block");
  const auto& data = j["data"];

  int payloads = (data.contains("counts") ? 1 : 0) + (data.contains("cells") ? 1 : 0) +
                 (data.contains("per_z") ? 1 : 0);
  if (payloads != 1)
    throw validation_error("input: data must hold exactly one of counts, cells, per_z");

  if (data.contains("counts")) {
    const auto& rows = data["counts"];
    if (!rows.is_array() || rows.empty()) throw validation_error("input: counts must be a nonempty array");
    SampleCounts c;
    bool first = true;
    for (const auto& row : rows) {
      if (!row.is_object()) throw validation_error("input: counts rows must be objects");
      bool has_z = row.contains("z");
      if (first) {
        c.has_z = has_z;
        first = false;
      } else if (has_z != c.has_z) {
        throw validation_error("input: counts rows must all have z or all omit it");
      }
      int z = has_z ? row["z"].get<int>() : 0;
      if (!row.contains("x") || !row.contains("y") || !row.contains("count"))
        throw validation_error("input: counts rows need x, y, count");
      int x = row["x"].get<int>();
      int y = row["y"].get<int>();
      if (z < 0 || z > 1 || x < 0 || x > 1 || y < 0 || y > 1)
        throw validation_error("input: z, x, y must be 0 or 1");
      std::int64_t cnt = row["count"].get<std::int64_t>();
      if (cnt < 0) throw validation_error("input: counts must be nonnegative");
      c.counts[z][x][y] += static_cast<std::uint64_t>(cnt);
    }
    c.n = 0;
    for (int z = 0; z < 2; ++z)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) c.n += c.counts[z][x][y];
    doc.counts = c;
  } else if (data.contains("cells")) {
    auto cells = detail::parse_cells(data["cells"]);
    doc.prob = ConditionalCellTable::from_cells(cells[0], cells[1], cells[2], cells[3]);
  } else {
    const auto& per_z = data["per_z"];
    if (!per_z.is_array() || per_z.size() != 2)
      throw validation_error("input: per_z must be an array of two cell objects");
    ConditionalCellTableIV t;
    for (int z = 0; z < 2; ++z) {
      auto cells = detail::parse_cells(per_z[static_cast<std::size_t>(z)]);
      t.per_z[z] = ConditionalCellTable::from_cells(cells[0], cells[1], cells[2], cells[3]);
    }
    if (!data.contains("z1_share") || !data["z1_share"].is_number())
      throw validation_error("input: per_z data needs z1_share (p{Z=1} within the selected sample)");
    t.z1_share = data["z1_share"].get<double>();
    doc.prob_iv = t;
  }

  if (j.contains("design")) {
    const auto& d = j["design"];
    if (!d.is_object()) throw validation_error("input: design must be an object");
    if (d.contains("r")) doc.r = d["r"].get<double>();
    if (d.contains("N")) {
      std::int64_t N = d["N"].get<std::int64_t>();
      if (N < 1) throw validation_error("input: N must be positive");
      doc.cohort = static_cast<std::uint64_t>(N);
    }
    if (doc.r && doc.cohort)
      throw validation_error("input: design must give either r or N, not both");
    if (d.contains("p_z1")) doc.p_z1 = d["p_z1"].get<double>();
    if (d.contains("sel_given_y")) {
      const auto& s = d["sel_given_y"];
      if (!s.is_array() || s.size() != 2)
        throw validation_error("input: sel_given_y must be [p{S=1|Y=0}, p{S=1|Y=1}]");
      doc.sel_given_y = {s[0].get<double>(), s[1].get<double>()};
    }
  }

  if (j.contains("settings")) {
    for (const auto& s : j["settings"]) {
      auto tag = setting_from_string(s.get<std::string>());
      if (!tag) throw validation_error("input: unknown setting " + s.get<std::string>());
      doc.settings.push_back(*tag);
    }
  }
  return doc;
}

// Table bundle from a parsed document. Settings that need no selection
// probability (A and B) tolerate a missing r; everything else requires it.
inline TableBundle document_to_bundle(const InputDocument& doc, bool require_r) {
  if (doc.counts) {
    SampleCounts c = *doc.counts;
    if (doc.cohort) c.N = doc.cohort;
    return counts_to_tables(c, doc.r, doc.p_z1, doc.sel_given_y);
  }
  TableBundle out;
  if (doc.prob) {
    require_valid(validate_table(*doc.prob), "input: cells");
    out.no_iv = doc.prob;
  } else if (doc.prob_iv) {
    require_valid(validate_table(*doc.prob_iv), "input: per_z cells");
    out.iv = doc.prob_iv;
    out.no_iv = marginal_over_z(*doc.prob_iv);
  } else {
    throw validation_error("input: no data payload");
  }
  if (doc.cohort) throw validation_error("input: N requires counts data");
  if (doc.r) {
    out.design.r = *doc.r;
    out.design.r_source = RSource::FixedByDesign;
  } else if (require_r) {
    throw validation_error("selection probability unavailable: supply r or cohort size N");
  }
  out.design.p_z1 = doc.p_z1;
  out.design.sel_given_y = doc.sel_given_y;
  require_valid(validate_design(out.design), "input: design");
  return out;
}

// --------------------------------------------------------------------------
// Shared output fragments

inline JsonValue interval_to_json(const BoundsInterval& b) {
  JsonValue v = JsonValue::object();
  v["setting"] = to_string(b.setting);
  v["lower"] = b.lower;
  v["upper"] = b.upper;
  v["width"] = b.width();
  v["case"] = to_string(b.case_label);
  JsonValue al = JsonValue::array(), au = JsonValue::array();
  for (int i : b.active_lower) al.push_back(i);
  for (int i : b.active_upper) au.push_back(i);
  v["active_lower"] = std::move(al);
  v["active_upper"] = std::move(au);
  v["inconsistent"] = b.inconsistent;
  if (b.clamped_lower || b.clamped_upper) {
    v["raw_lower"] = b.raw_lower;
    v["raw_upper"] = b.raw_upper;
  }
  if (b.components) {
    JsonValue c = JsonValue::object();
    c["lower_instrumented"] = b.components->l_d;
    c["upper_instrumented"] = b.components->u_d;
    c["lower_confounded"] = b.components->l_f;
    c["upper_confounded"] = b.components->u_f;
    v["components"] = std::move(c);
  }
  if (!b.notes.empty()) {
    JsonValue notes = JsonValue::array();
    for (const auto& n : b.notes) notes.push_back(n);
    v["notes"] = std::move(notes);
  }
  return v;
}

}  // namespace odsbounds
