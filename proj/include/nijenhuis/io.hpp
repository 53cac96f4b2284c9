#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "core.hpp"
#include "defext.hpp"
#include "homotopy.hpp"
#include "report.hpp"

namespace nij {

using json = nlohmann::json;

inline constexpr int document_version = 1;

/// Parse failure with its location. kind is one of syntax, scalar, dimension, version, schema.
class DocumentError : public StructureError {
 public:
  DocumentError(std::string kind, std::string pointer, std::size_t line, std::size_t column, const std::string& msg)
      : StructureError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + kind +
                       " error" + (pointer.empty() ? "" : " at " + pointer) + ": " + msg),
        kind_(std::move(kind)), pointer_(std::move(pointer)), line_(line), column_(column), message_(msg) {}

  const std::string& kind() const { return kind_; }
  const std::string& pointer() const { return pointer_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string kind_, pointer_;
  std::size_t line_, column_;
  std::string message_;
};

struct NamedCochain {
  std::string name;
  std::size_t degree = 0;
  Vector values;

  friend bool operator==(const NamedCochain& a, const NamedCochain& b) {
    return a.name == b.name && a.degree == b.degree && a.values == b.values;
  }
};

struct InfinitesimalData {
  MultiMap mu1;  // A^2 -> A
  Matrix n1;

  friend bool operator==(const InfinitesimalData& a, const InfinitesimalData& b) {
    return a.mu1 == b.mu1 && a.n1 == b.n1;
  }
};

/// Everything a document may declare. Dimensions of later fields follow from algebra/bimodule.
struct Document {
  std::optional<Algebra> algebra;
  std::optional<Matrix> op;
  std::optional<Bimodule> bimodule;
  std::optional<Matrix> bimodule_op;
  std::vector<NamedCochain> cochains;
  std::vector<InfinitesimalData> deformations;
  std::optional<Cocycle2> cocycle;
  std::optional<Extension> extension;
  std::optional<AutoPair> pair;
  std::optional<Matrix> lambda;
  std::optional<Matrix> automorphism;
  std::optional<TwoTermAInf> two_term;
  std::optional<HomotopyNijOp> homotopy_op;
  std::optional<GradedAInf> graded;
  std::optional<Matrix> graded_op;

  bool has_nij_algebra() const { return algebra && op; }
  bool has_nij_bimodule() const { return bimodule && bimodule_op; }
  NijAlgebra nij_algebra() const {
    if (!has_nij_algebra()) throw StructureError("document declares no Nijenhuis algebra");
    return {*algebra, *op};
  }
  NijBimodule nij_bimodule() const {
    if (!has_nij_bimodule()) throw StructureError("document declares no Nijenhuis bimodule");
    return {*bimodule, *bimodule_op};
  }
};

namespace detail {

template <class T>
bool same_optional(const std::optional<T>& a, const std::optional<T>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

inline bool same_extension(const std::optional<Extension>& a, const std::optional<Extension>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->total.algebra == b->total.algebra && a->total.op == b->total.op && a->incl == b->incl &&
         a->proj == b->proj && a->section == b->section;
}

inline bool same_pair(const std::optional<AutoPair>& a, const std::optional<AutoPair>& b) {
  return a.has_value() == b.has_value() && (!a || (a->alpha == b->alpha && a->beta == b->beta));
}

}  // namespace detail

inline bool operator==(const Document& a, const Document& b) {
  using detail::same_optional;
  return same_optional(a.algebra, b.algebra) && same_optional(a.op, b.op) && same_optional(a.bimodule, b.bimodule) &&
         same_optional(a.bimodule_op, b.bimodule_op) && a.cochains == b.cochains &&
         a.deformations == b.deformations && same_optional(a.cocycle, b.cocycle) &&
         detail::same_extension(a.extension, b.extension) && detail::same_pair(a.pair, b.pair) &&
         same_optional(a.lambda, b.lambda) && same_optional(a.automorphism, b.automorphism) &&
         same_optional(a.two_term, b.two_term) && same_optional(a.homotopy_op, b.homotopy_op) &&
         same_optional(a.graded, b.graded) && same_optional(a.graded_op, b.graded_op);
}

// ---------------------------------------------------------------------------------------------
// Locating values: a SAX pass over a counting iterator records where each JSON pointer starts.

namespace detail {

struct CountingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  std::size_t* consumed = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    ++*consumed;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p == b.p; }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p != b.p; }
};

struct LineColumn {
  std::size_t line = 1, column = 1;
};

inline LineColumn line_column(const std::string& text, std::size_t offset) {
  LineColumn lc;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

inline std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class LocatingHandler {
 public:
  using number_integer_t = json::number_integer_t;
  using number_unsigned_t = json::number_unsigned_t;
  using number_float_t = json::number_float_t;
  using string_t = json::string_t;
  using binary_t = json::binary_t;

  LocatingHandler(json& root, const std::string& text, const std::size_t& consumed)
      : dom_(root, true), text_(text), consumed_(consumed) {}

  std::map<std::string, std::size_t> positions;

  // Numbers are seen one character late (the lexer reads past them); other tokens end exactly.
  bool null() { return value(4, dom_.null()); }
  bool boolean(bool v) { return value(v ? 4 : 5, dom_.boolean(v)); }
  bool number_integer(number_integer_t v) { return value(std::to_string(v).size() + 1, dom_.number_integer(v)); }
  bool number_unsigned(number_unsigned_t v) { return value(std::to_string(v).size() + 1, dom_.number_unsigned(v)); }
  bool number_float(number_float_t v, const string_t& s) { return value(s.size() + 1, dom_.number_float(v, s)); }
  bool string(string_t& v) { return value(v.size() + 2, dom_.string(v)); }
  bool binary(binary_t& v) { return value(0, dom_.binary(v)); }

  bool start_object(std::size_t n) {
    record(1);
    frames_.push_back({false, 0, "", {}});
    return dom_.start_object(n);
  }
  bool key(string_t& k) {
    Frame& f = frames_.back();
    if (!f.keys.insert(k).second) {
      auto lc = line_column(text_, consumed_);
      throw DocumentError("schema", pointer_upto(frames_.size() - 1) + "/" + escape_pointer_token(k), lc.line, lc.column,
                          "duplicate key '" + k + "'");
    }
    f.key = k;
    return dom_.key(k);
  }
  bool end_object() {
    frames_.pop_back();
    advance();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    record(1);
    frames_.push_back({true, 0, "", {}});
    return dom_.start_array(n);
  }
  bool end_array() {
    frames_.pop_back();
    advance();
    return dom_.end_array();
  }

  template <class Exception>
  [[noreturn]] bool parse_error(std::size_t position, const std::string&, const Exception& ex) {
    auto lc = line_column(text_, position > 0 ? position - 1 : 0);
    std::string msg = ex.what();
    auto colon = msg.find("syntax error");
    throw DocumentError("syntax", "", lc.line, lc.column, colon == std::string::npos ? msg : msg.substr(colon));
  }

 private:
  struct Frame {
    bool array;
    std::size_t index;
    std::string key;
    std::set<std::string> keys;
  };

  std::string pointer_upto(std::size_t n) const {
    std::string p;
    for (std::size_t i = 0; i < n; ++i)
      p += "/" + (frames_[i].array ? std::to_string(frames_[i].index) : escape_pointer_token(frames_[i].key));
    return p;
  }

  std::string slot_pointer() const { return pointer_upto(frames_.size()); }

  void record(std::size_t length) { positions.emplace(slot_pointer(), consumed_ >= length ? consumed_ - length : 0); }

  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  bool value(std::size_t length, bool ok) {
    record(length);
    advance();
    return ok;
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const std::string& text_;
  const std::size_t& consumed_;
  std::vector<Frame> frames_;
};

/// Parsed JSON plus the start offset of every value, for diagnostics.
struct LocatedJson {
  json root;
  std::string text;
  std::map<std::string, std::size_t> positions;

  LineColumn where(std::string pointer) const {
    while (true) {
      auto it = positions.find(pointer);
      if (it != positions.end()) return line_column(text, it->second);
      if (pointer.empty()) return {};
      pointer = pointer.substr(0, pointer.rfind('/'));
    }
  }
};

inline LocatedJson parse_located(const std::string& text) {
  LocatedJson out;
  out.text = text;
  std::size_t consumed = 0;
  LocatingHandler handler(out.root, out.text, consumed);
  CountingIterator first{out.text.data(), &consumed}, last{out.text.data() + out.text.size(), &consumed};
  json::sax_parse(first, last, &handler);
  out.positions = std::move(handler.positions);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Reading typed fields.

class Reader {
 public:
  explicit Reader(const LocatedJson& doc) : doc_(doc) {}

  [[noreturn]] void fail(const std::string& kind, const std::string& pointer, const std::string& msg) const {
    auto lc = doc_.where(pointer);
    throw DocumentError(kind, pointer, lc.line, lc.column, msg);
  }

  const json& object(const json& j, const std::string& ptr, const std::vector<std::string>& allowed,
                     const std::vector<std::string>& required) const {
    if (!j.is_object()) fail("schema", ptr, "expected an object");
    for (const auto& [k, v] : j.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        fail("schema", ptr + "/" + escape_pointer_token(k), "unknown field '" + k + "'");
    for (const auto& k : required)
      if (!j.contains(k)) fail("schema", ptr, "missing field '" + k + "'");
    return j;
  }

  std::size_t size(const json& j, const std::string& ptr) const {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
      fail("schema", ptr, "expected a non-negative integer");
    return j.get<std::size_t>();
  }

  int integer(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) fail("schema", ptr, "expected an integer");
    return j.get<int>();
  }

  Scalar scalar(const json& j, const std::string& ptr) const {
    if (j.is_number_unsigned()) return Scalar(mpz_class(std::to_string(j.get<json::number_unsigned_t>())));
    if (j.is_number_integer()) return Scalar(mpz_class(std::to_string(j.get<json::number_integer_t>())));
    if (j.is_number_float()) fail("scalar", ptr, "non-integer number; write fractions as \"p/q\" strings");
    if (!j.is_string()) fail("scalar", ptr, "expected an integer or a \"p/q\" string");
    try {
      return parse_scalar(j.get<std::string>());
    } catch (const ScalarFormatError& e) {
      fail("scalar", ptr, e.what());
    }
  }

  Vector flat(const json& j, const std::string& ptr, std::size_t expected, const std::string& shape) const {
    if (!j.is_array()) fail("schema", ptr, "expected an array");
    if (j.size() != expected)
      fail("dimension", ptr,
           "field '" + field_name(ptr) + "' has " + std::to_string(j.size()) + " entries, expected " +
               std::to_string(expected) + " (" + shape + ")");
    Vector v;
    v.reserve(expected);
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(scalar(j[i], ptr + "/" + std::to_string(i)));
    return v;
  }

  Matrix matrix(const json& j, const std::string& ptr, std::size_t rows, std::size_t cols) const {
    if (!j.is_array()) fail("schema", ptr, "expected an array of rows");
    if (j.size() != rows)
      fail("dimension", ptr,
           "field '" + field_name(ptr) + "' has " + std::to_string(j.size()) + " rows, expected " +
               std::to_string(rows));
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      Vector row = flat(j[r], rp, cols, std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  }

  Tensor3 tensor(const json& j, const std::string& ptr, std::size_t n0, std::size_t n1, std::size_t n2,
                 const std::string& shape) const {
    Vector v = flat(j, ptr, n0 * n1 * n2, shape);
    Tensor3 t(n0, n1, n2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) t(i, a, b) = v[idx++];
    return t;
  }

  MultiMap multimap(const json& j, const std::string& ptr, std::size_t arity, std::size_t d, std::size_t w,
                    const std::string& shape) const {
    return MultiMap::from_vector(arity, d, w, flat(j, ptr, ipow(d, arity) * w, shape));
  }

 private:
  static std::string field_name(const std::string& ptr) {
    std::string out;
    std::size_t start = 1;
    while (start <= ptr.size()) {
      std::size_t end = ptr.find('/', start);
      std::string tok = ptr.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!tok.empty()) out += (out.empty() ? "" : ".") + tok;
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return out;
  }

  const LocatedJson& doc_;
};

inline std::string cube(std::size_t d, const std::string& name) {
  return name + "^3 with " + name + " = " + std::to_string(d);
}

inline Algebra read_algebra(const Reader& rd, const json& j, const std::string& ptr) {
  rd.object(j, ptr, {"dim", "mu"}, {"dim", "mu"});
  const std::size_t d = rd.size(j["dim"], ptr + "/dim");
  return Algebra(rd.tensor(j["mu"], ptr + "/mu", d, d, d, cube(d, "d")));
}

}  // namespace detail

/// context supplies the algebra and bimodule when the text declares fields over them without its own.
inline Document parse_document(const std::string& text, const Document* context = nullptr) {
  detail::LocatedJson located = detail::parse_located(text);
  const json& root = located.root;
  detail::Reader rd(located);
  rd.object(root, "",
            {"version", "algebra", "operator", "bimodule", "bimodule_operator", "cochains", "deformations", "cocycle",
             "extension", "pair", "lambda", "automorphism", "two_term", "homotopy_operator", "graded",
             "graded_operator"},
            {});
  if (!root.contains("version")) rd.fail("version", "", "missing field 'version'");
  if (!root["version"].is_number_integer() || root["version"].get<long long>() != document_version)
    rd.fail("version", "/version", "unsupported document version " + root["version"].dump() + ", expected 1");

  Document doc;
  auto need = [&](bool have, const std::string& field, const std::string& what) {
    if (!have) rd.fail("schema", "/" + field, "field '" + field + "' needs " + what);
  };

  std::size_t d = 0, m = 0;
  if (context && !root.contains("algebra") && !root.contains("bimodule")) {
    doc.algebra = context->algebra;
    doc.op = context->op;
    doc.bimodule = context->bimodule;
    doc.bimodule_op = context->bimodule_op;
    if (doc.algebra) d = doc.algebra->dim();
    if (doc.bimodule) m = doc.bimodule->dim();
  }
  if (root.contains("algebra")) {
    doc.algebra = detail::read_algebra(rd, root["algebra"], "/algebra");
    d = doc.algebra->dim();
  }
  if (root.contains("operator")) {
    need(doc.algebra.has_value(), "operator", "'algebra'");
    doc.op = rd.matrix(root["operator"], "/operator", d, d);
  }
  if (root.contains("bimodule")) {
    need(doc.algebra.has_value(), "bimodule", "'algebra'");
    const json& b = rd.object(root["bimodule"], "/bimodule", {"dim", "left", "right"}, {"dim", "left", "right"});
    m = rd.size(b["dim"], "/bimodule/dim");
    const std::string shape = "d*m*m with d = " + std::to_string(d) + ", m = " + std::to_string(m);
    Tensor3 left = rd.tensor(b["left"], "/bimodule/left", d, m, m, shape);
    Tensor3 right = rd.tensor(b["right"], "/bimodule/right", m, d, m, shape);
    doc.bimodule = Bimodule(left, right);
  }
  if (root.contains("bimodule_operator")) {
    need(doc.bimodule.has_value(), "bimodule_operator", "'bimodule'");
    doc.bimodule_op = rd.matrix(root["bimodule_operator"], "/bimodule_operator", m, m);
  }
  if (root.contains("cochains")) {
    const json& cs = root["cochains"];
    if (!cs.is_array()) rd.fail("schema", "/cochains", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = "/cochains/" + std::to_string(i);
      const json& c = rd.object(cs[i], p, {"name", "degree", "values"}, {"name", "degree", "values"});
      if (!c["name"].is_string()) rd.fail("schema", p + "/name", "expected a string");
      if (!c["values"].is_array()) rd.fail("schema", p + "/values", "expected an array");
      NamedCochain nc{c["name"].get<std::string>(), rd.size(c["degree"], p + "/degree"), {}};
      nc.values = rd.flat(c["values"], p + "/values", c["values"].size(), "");
      doc.cochains.push_back(std::move(nc));
    }
  }
  if (root.contains("deformations")) {
    need(doc.has_nij_algebra(), "deformations", "'algebra' and 'operator'");
    const json& ds = root["deformations"];
    if (!ds.is_array()) rd.fail("schema", "/deformations", "expected an array");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string p = "/deformations/" + std::to_string(i);
      const json& x = rd.object(ds[i], p, {"mu1", "n1"}, {"mu1", "n1"});
      doc.deformations.push_back(
          {rd.multimap(x["mu1"], p + "/mu1", 2, d, d, detail::cube(d, "d")), rd.matrix(x["n1"], p + "/n1", d, d)});
    }
  }
  if (root.contains("cocycle")) {
    need(doc.algebra && doc.bimodule, "cocycle", "'algebra' and 'bimodule'");
    const json& c = rd.object(root["cocycle"], "/cocycle", {"chi", "f"}, {"chi", "f"});
    const std::string shape = "d*d*m with d = " + std::to_string(d) + ", m = " + std::to_string(m);
    Cocycle2 z{rd.multimap(c["chi"], "/cocycle/chi", 2, d, m, shape), {}};
    z.f_part = MultiMap::from_matrix(rd.matrix(c["f"], "/cocycle/f", m, d));
    doc.cocycle = std::move(z);
  }
  if (root.contains("extension")) {
    need(doc.has_nij_algebra() && doc.has_nij_bimodule(), "extension",
         "'algebra', 'operator', 'bimodule' and 'bimodule_operator'");
    const json& e = rd.object(root["extension"], "/extension", {"algebra", "operator", "incl", "proj", "section"},
                              {"algebra", "operator", "incl", "proj", "section"});
    Algebra total = detail::read_algebra(rd, e["algebra"], "/extension/algebra");
    if (total.dim() != d + m)
      rd.fail("dimension", "/extension/algebra/dim",
              "extension algebra has dimension " + std::to_string(total.dim()) + ", expected d + m = " +
                  std::to_string(d + m));
    const std::size_t n = d + m;
    doc.extension = Extension{{total, rd.matrix(e["operator"], "/extension/operator", n, n)},
                              rd.matrix(e["incl"], "/extension/incl", n, m),
                              rd.matrix(e["proj"], "/extension/proj", d, n),
                              rd.matrix(e["section"], "/extension/section", n, d),
                              doc.nij_algebra(),
                              doc.nij_bimodule()};
  }
  if (root.contains("pair")) {
    need(doc.algebra && doc.bimodule, "pair", "'algebra' and 'bimodule'");
    const json& p = rd.object(root["pair"], "/pair", {"alpha", "beta"}, {"alpha", "beta"});
    doc.pair = AutoPair{rd.matrix(p["beta"], "/pair/beta", m, m), rd.matrix(p["alpha"], "/pair/alpha", d, d)};
  }
  if (root.contains("lambda")) {
    need(doc.algebra && doc.bimodule, "lambda", "'algebra' and 'bimodule'");
    doc.lambda = rd.matrix(root["lambda"], "/lambda", m, d);
  }
  if (root.contains("automorphism")) {
    need(doc.algebra && doc.bimodule, "automorphism", "'algebra' and 'bimodule'");
    doc.automorphism = rd.matrix(root["automorphism"], "/automorphism", d + m, d + m);
  }
  std::size_t a0 = 0, a1 = 0;
  if (root.contains("two_term")) {
    const json& t = rd.object(root["two_term"], "/two_term", {"dim0", "dim1", "bdry", "m00", "m01", "m10", "mu3"},
                              {"dim0", "dim1", "bdry", "m00", "m01", "m10", "mu3"});
    a0 = rd.size(t["dim0"], "/two_term/dim0");
    a1 = rd.size(t["dim1"], "/two_term/dim1");
    const std::string dims = " with dim0 = " + std::to_string(a0) + ", dim1 = " + std::to_string(a1);
    TwoTermAInf tt;
    tt.a0 = a0;
    tt.a1 = a1;
    tt.bdry = rd.matrix(t["bdry"], "/two_term/bdry", a0, a1);
    tt.m00 = rd.tensor(t["m00"], "/two_term/m00", a0, a0, a0, "dim0^3" + dims);
    tt.m01 = rd.tensor(t["m01"], "/two_term/m01", a0, a1, a1, "dim0*dim1^2" + dims);
    tt.m10 = rd.tensor(t["m10"], "/two_term/m10", a1, a0, a1, "dim0*dim1^2" + dims);
    tt.mu3 = rd.multimap(t["mu3"], "/two_term/mu3", 3, a0, a1, "dim0^3*dim1" + dims);
    doc.two_term = std::move(tt);
  }
  if (root.contains("homotopy_operator")) {
    need(doc.two_term.has_value(), "homotopy_operator", "'two_term'");
    const json& h = rd.object(root["homotopy_operator"], "/homotopy_operator", {"n0", "n1", "n2"}, {"n0", "n1", "n2"});
    doc.homotopy_op = HomotopyNijOp{
        rd.matrix(h["n0"], "/homotopy_operator/n0", a0, a0), rd.matrix(h["n1"], "/homotopy_operator/n1", a1, a1),
        rd.multimap(h["n2"], "/homotopy_operator/n2", 2, a0, a1, "dim0^2*dim1")};
  }
  if (root.contains("graded")) {
    const json& g = rd.object(root["graded"], "/graded", {"degrees", "ops"}, {"degrees", "ops"});
    if (!g["degrees"].is_array()) rd.fail("schema", "/graded/degrees", "expected an array");
    GradedAInf ga;
    for (std::size_t i = 0; i < g["degrees"].size(); ++i)
      ga.space.degrees.push_back(rd.integer(g["degrees"][i], "/graded/degrees/" + std::to_string(i)));
    if (!g["ops"].is_array()) rd.fail("schema", "/graded/ops", "expected an array");
    const std::size_t n = ga.dim();
    for (std::size_t k = 1; k <= g["ops"].size(); ++k)
      ga.ops.push_back(rd.multimap(g["ops"][k - 1], "/graded/ops/" + std::to_string(k - 1), k, n, n,
                                   "n^" + std::to_string(k + 1) + " with n = " + std::to_string(n)));
    doc.graded = std::move(ga);
  }
  if (root.contains("graded_operator")) {
    need(doc.graded.has_value(), "graded_operator", "'graded'");
    doc.graded_op = rd.matrix(root["graded_operator"], "/graded_operator", doc.graded->dim(), doc.graded->dim());
  }
  return doc;
}

// ---------------------------------------------------------------------------------------------
// Emission.

inline json scalar_json(const Scalar& q) {
  if (fits_int64(q)) return json(static_cast<long long>(q.get_num().get_si()));
  return json(format_scalar(q));
}

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

inline json matrix_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    a.push_back(row);
  }
  return a;
}

inline json tensor_json(const Tensor3& t) { return vector_json(t.data()); }
inline json multimap_json(const MultiMap& f) { return vector_json(f.entries()); }

inline json algebra_json(const Algebra& a) { return {{"dim", a.dim()}, {"mu", tensor_json(a.mu())}}; }

inline json bimodule_json(const Bimodule& b) {
  return {{"dim", b.dim()}, {"left", tensor_json(b.left())}, {"right", tensor_json(b.right())}};
}

inline json two_term_json(const TwoTermAInf& t) {
  return {{"dim0", t.a0},
          {"dim1", t.a1},
          {"bdry", matrix_json(t.bdry)},
          {"m00", tensor_json(t.m00)},
          {"m01", tensor_json(t.m01)},
          {"m10", tensor_json(t.m10)},
          {"mu3", multimap_json(t.mu3)}};
}

inline json homotopy_op_json(const HomotopyNijOp& h) {
  return {{"n0", matrix_json(h.n0)}, {"n1", matrix_json(h.n1)}, {"n2", multimap_json(h.n2)}};
}

inline json graded_json(const GradedAInf& g) {
  json ops = json::array();
  for (const auto& op : g.ops) ops.push_back(multimap_json(op));
  return {{"degrees", g.space.degrees}, {"ops", ops}};
}

inline json document_json(const Document& doc) {
  json j = json::object();
  j["version"] = document_version;
  if (doc.algebra) j["algebra"] = algebra_json(*doc.algebra);
  if (doc.op) j["operator"] = matrix_json(*doc.op);
  if (doc.bimodule) j["bimodule"] = bimodule_json(*doc.bimodule);
  if (doc.bimodule_op) j["bimodule_operator"] = matrix_json(*doc.bimodule_op);
  if (!doc.cochains.empty()) {
    json cs = json::array();
    for (const auto& c : doc.cochains)
      cs.push_back({{"name", c.name}, {"degree", c.degree}, {"values", vector_json(c.values)}});
    j["cochains"] = cs;
  }
  if (!doc.deformations.empty()) {
    json ds = json::array();
    for (const auto& x : doc.deformations) ds.push_back({{"mu1", multimap_json(x.mu1)}, {"n1", matrix_json(x.n1)}});
    j["deformations"] = ds;
  }
  if (doc.cocycle) j["cocycle"] = {{"chi", multimap_json(doc.cocycle->chi)}, {"f", matrix_json(doc.cocycle->f_part.to_matrix())}};
  if (doc.extension)
    j["extension"] = {{"algebra", algebra_json(doc.extension->total.algebra)},
                      {"operator", matrix_json(doc.extension->total.op)},
                      {"incl", matrix_json(doc.extension->incl)},
                      {"proj", matrix_json(doc.extension->proj)},
                      {"section", matrix_json(doc.extension->section)}};
  if (doc.pair) j["pair"] = {{"alpha", matrix_json(doc.pair->alpha)}, {"beta", matrix_json(doc.pair->beta)}};
  if (doc.lambda) j["lambda"] = matrix_json(*doc.lambda);
  if (doc.automorphism) j["automorphism"] = matrix_json(*doc.automorphism);
  if (doc.two_term) j["two_term"] = two_term_json(*doc.two_term);
  if (doc.homotopy_op) j["homotopy_operator"] = homotopy_op_json(*doc.homotopy_op);
  if (doc.graded) j["graded"] = graded_json(*doc.graded);
  if (doc.graded_op) j["graded_operator"] = matrix_json(*doc.graded_op);
  return j;
}

namespace detail {

inline bool is_leaf(const json& j) { return !j.is_array() && !j.is_object(); }

inline void emit(const json& j, std::string& out, std::size_t indent) {
  const std::string pad(indent + 2, ' '), close(indent, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(k).dump() + ": ";
      emit(v, out, indent + 2);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (std::all_of(j.begin(), j.end(), is_leaf)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      emit(j[i], out, indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace detail

/// Canonical text: sorted keys, two-space indent, leaf arrays on one line, trailing newline.
inline std::string emit_json(const json& j) {
  std::string out;
  detail::emit(j, out, 0);
  return out + "\n";
}

inline std::string emit_document(const Document& doc) { return emit_json(document_json(doc)); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Document load_document(const std::string& path, const Document* context = nullptr) {
  return parse_document(read_text(path), context);
}

// ---------------------------------------------------------------------------------------------
// Report fragments.

inline json tuple_json(const std::vector<std::size_t>& t) { return json(t); }

inline json report_json(const Report& r, std::size_t limit = 10) {
  json v = json::array();
  for (std::size_t i = 0; i < std::min(limit, r.violations.size()); ++i) {
    const auto& x = r.violations[i];
    v.push_back({{"law", x.law}, {"tuple", tuple_json(x.tuple)}, {"lhs", vector_json(x.lhs)}, {"rhs", vector_json(x.rhs)}});
  }
  return {{"ok", r.ok()},
          {"laws", r.laws},
          {"violation_count", r.violations.size()},
          {"violations", v},
          {"notes", r.notes}};
}

}  // namespace nij
