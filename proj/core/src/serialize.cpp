#include "ringrep/serialize.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ringrep {

namespace {

using nlohmann::json;

json cyclo_to_json(const Cyclo& v) {
  json coeffs = json::array();
  for (const mpq_class& c : v.coeffs()) coeffs.push_back(c.get_str());
  return json{{"conductor", v.conductor()}, {"coeffs", std::move(coeffs)}};
}

Cyclo cyclo_from_json(const json& j) {
  int m = j.at("conductor").get<int>();
  if (m < 1) throw std::runtime_error("table document: conductor < 1");
  const json& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || coeffs.empty())
    throw std::runtime_error("table document: empty coefficient vector");
  // Rebuild as sum_k c_k * zeta_m^k.  Every summand carries conductor
  // exactly m and the basis powers are unit coefficient vectors, so the
  // result's internal representation is exactly (m, coeffs) and
  // re-serialization is byte-identical.
  Cyclo out;
  std::vector<mpq_class> parsed;
  parsed.reserve(coeffs.size());
  for (size_t k = 0; k < coeffs.size(); ++k) {
    mpq_class c(coeffs[k].get<std::string>());
    c.canonicalize();
    parsed.push_back(c);
    out += Cyclo(c) * Cyclo::root_of_unity(m, static_cast<long>(k));
  }
  if (out.conductor() != m || out.coeffs() != parsed)
    throw std::runtime_error(
        "table document: coefficient vector does not match the conductor");
  return out;
}

}  // namespace

TableDoc make_table_doc(int n, int q, int r, const TruncRing& ring,
                        const std::vector<Mat>& elems, const ConjClasses& cls,
                        const CharacterTable& tab) {
  TableDoc doc;
  doc.n = n;
  doc.q = q;
  doc.r = r;
  doc.order = static_cast<long long>(elems.size());
  doc.classes.reserve(static_cast<size_t>(cls.num()));
  for (int c = 0; c < cls.num(); ++c) {
    const ConjClass& cl = cls.cls(c);
    TableDoc::ClassRow row;
    row.size = cl.size;
    row.element_order = cl.elt_order;
    const Mat& g = elems[static_cast<size_t>(cl.rep)];
    row.rep.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      row.rep[static_cast<size_t>(i)].resize(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) {
        std::vector<std::uint64_t>& entry =
            row.rep[static_cast<size_t>(i)][static_cast<size_t>(j)];
        entry.resize(static_cast<size_t>(r));
        for (int k = 0; k < r; ++k)
          entry[static_cast<size_t>(k)] =
              ring.tower().encode(g.at(i, j)[static_cast<size_t>(k)]);
      }
    }
    doc.classes.push_back(std::move(row));
  }
  doc.irreducibles.reserve(static_cast<size_t>(tab.num()));
  for (int i = 0; i < tab.num(); ++i) {
    TableDoc::IrrRow row;
    row.degree = tab.degree(i);
    row.values = tab.row(i).values();
    doc.irreducibles.push_back(std::move(row));
  }
  return doc;
}

std::string table_doc_to_json(const TableDoc& doc) {
  json root;
  root["format_version"] = doc.format_version;
  root["group"] = {{"n", doc.n},
                   {"q", doc.q},
                   {"r", doc.r},
                   {"order", doc.order},
                   {"num_classes", doc.classes.size()}};
  json classes = json::array();
  for (const TableDoc::ClassRow& c : doc.classes)
    classes.push_back(json{{"size", c.size},
                           {"element_order", c.element_order},
                           {"rep", c.rep}});
  root["classes"] = std::move(classes);
  json irrs = json::array();
  for (const TableDoc::IrrRow& row : doc.irreducibles) {
    json values = json::array();
    for (const Cyclo& v : row.values) values.push_back(cyclo_to_json(v));
    irrs.push_back(json{{"degree", row.degree}, {"values", std::move(values)}});
  }
  root["irreducibles"] = std::move(irrs);
  return root.dump(2) + "\n";
}

TableDoc table_doc_from_json(const std::string& text) {
  try {
    json root = json::parse(text);
    TableDoc doc;
    doc.format_version = root.at("format_version").get<int>();
    if (doc.format_version != kTableFormatVersion)
      throw std::runtime_error("table document: unsupported format version " +
                               std::to_string(doc.format_version));
    const json& grp = root.at("group");
    doc.n = grp.at("n").get<int>();
    doc.q = grp.at("q").get<int>();
    doc.r = grp.at("r").get<int>();
    doc.order = grp.at("order").get<long long>();
    const size_t num_classes = grp.at("num_classes").get<size_t>();
    const json& classes = root.at("classes");
    if (!classes.is_array() || classes.size() != num_classes)
      throw std::runtime_error("table document: class count mismatch");
    for (const json& c : classes) {
      TableDoc::ClassRow row;
      row.size = c.at("size").get<long long>();
      row.element_order = c.at("element_order").get<std::uint64_t>();
      row.rep =
          c.at("rep").get<std::vector<std::vector<std::vector<std::uint64_t>>>>();
      if (row.rep.size() != static_cast<size_t>(doc.n))
        throw std::runtime_error("table document: representative shape");
      for (const auto& matrix_row : row.rep) {
        if (matrix_row.size() != static_cast<size_t>(doc.n))
          throw std::runtime_error("table document: representative shape");
        for (const auto& entry : matrix_row)
          if (entry.size() != static_cast<size_t>(doc.r))
            throw std::runtime_error("table document: representative shape");
      }
      doc.classes.push_back(std::move(row));
    }
    for (const json& r : root.at("irreducibles")) {
      TableDoc::IrrRow row;
      row.degree = r.at("degree").get<long long>();
      for (const json& v : r.at("values")) row.values.push_back(cyclo_from_json(v));
      if (row.values.size() != num_classes)
        throw std::runtime_error("table document: value count mismatch");
      doc.irreducibles.push_back(std::move(row));
    }
    if (doc.irreducibles.size() != num_classes)
      throw std::runtime_error("table document: irreducible count mismatch");
    return doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("table document: ") + e.what());
  }
}

std::string table_doc_degree_csv(const TableDoc& doc) {
  std::map<long long, long long> counts;
  for (const TableDoc::IrrRow& row : doc.irreducibles) ++counts[row.degree];
  std::ostringstream out;
  out << "degree,count\n";
  for (const auto& [deg, count] : counts) out << deg << "," << count << "\n";
  return out.str();
}

std::string default_cache_dir() {
  const char* env = std::getenv("RINGREP_CACHE_DIR");
  if (env != nullptr && *env != '\0') return env;
  return ".ringrep-cache";
}

std::string cache_file_name(int n, int q, int r) {
  std::ostringstream name;
  name << "table-n" << n << "-q" << q << "-r" << r << "-v"
       << kTableFormatVersion << ".json";
  return name.str();
}

bool load_cached_table(const std::string& dir, int n, int q, int r,
                       TableDoc* out) {
  std::filesystem::path path =
      std::filesystem::path(dir) / cache_file_name(n, q, r);
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream text;
  text << in.rdbuf();
  if (!in.good() && !in.eof())
    throw std::runtime_error("cache: failed reading " + path.string());
  TableDoc doc = table_doc_from_json(text.str());
  if (doc.n != n || doc.q != q || doc.r != r)
    throw std::runtime_error("cache: key mismatch in " + path.string());
  *out = std::move(doc);
  return true;
}

void save_cached_table(const std::string& dir, const TableDoc& doc) {
  std::filesystem::path path =
      std::filesystem::path(dir) / cache_file_name(doc.n, doc.q, doc.r);
  write_file_atomic(path.string(), table_doc_to_json(doc));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out.good()) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace ringrep
