#include "tvn/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvn/version.hpp"

namespace tvn {
namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // e.byte is the offset of the failure in the input.
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::vector<int> int_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError(what + " must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> real_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(what + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

// 17 significant digits: enough for an exact decimal round trip of binary64.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
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
  return out;
}

json tensor_json(const DenseTensor& x) {
  return json{{"shape", x.shape()}, {"data", x.data()}};
}

DenseTensor tensor_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": tensor file must be a JSON object");
  auto shape = int_list(field(j, "shape", path), path + ": shape");
  auto data = real_list(field(j, "data", path), path + ": data");
  return DenseTensor(std::move(shape), std::move(data));
}

}  // namespace

DenseTensor read_tensor(const std::string& path) {
  return tensor_from_json(parse_file(path), path);
}

void write_tensor(const DenseTensor& x, const std::string& path) {
  write_text(path, tensor_json(x).dump() + "\n");
}

Matrix read_matrix(const std::string& path) {
  DenseTensor t = read_tensor(path);
  if (t.order() != 2) {
    throw ValidationError(path + ": expected a 2-mode tensor, got " + std::to_string(t.order()) +
                          " modes");
  }
  return tensor_to_matrix(t);
}

void write_matrix(const Matrix& m, const std::string& path) {
  write_tensor(matrix_to_tensor(m), path);
}

BlockDiagonalSpec read_block_spec(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object()) throw ParseError(path + ": spec file must be a JSON object");
  BlockDiagonalSpec spec;
  spec.ambient_shape = int_list(field(j, "ambient_shape", path), path + ": ambient_shape");
  const json& bs = field(j, "block_shapes", path);
  if (!bs.is_array()) throw ParseError(path + ": block_shapes must be an array");
  for (const auto& b : bs) {
    spec.block_shapes.push_back(int_list(b, path + ": block_shapes entry"));
  }
  spec.ratios = real_list(field(j, "ratios", path), path + ": ratios");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw ParseError(path + ": seed must be a nonnegative integer");
    }
    spec.seed = it->get<std::uint64_t>();
  }
  spec.validate();
  return spec;
}

void write_block_spec(const BlockDiagonalSpec& spec, const std::string& path) {
  json j{{"ambient_shape", spec.ambient_shape},
         {"block_shapes", spec.block_shapes},
         {"ratios", spec.ratios},
         {"seed", spec.seed}};
  write_text(path, j.dump() + "\n");
}

void write_report(const ReportFile& r, const std::string& path) {
  std::ostringstream out;
  auto real_array = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += fmt17(v[i]);
    }
    return s + "]";
  };
  std::string flags = "[";
  for (std::size_t i = 0; i < r.report.equality_per_mode.size(); ++i) {
    if (i) flags += ",";
    flags += r.report.equality_per_mode[i] ? "true" : "false";
  }
  flags += "]";

  out << "{\n";
  out << "  \"version\": \"" << json_escape(r.version) << "\",\n";
  out << "  \"inputs\": {\n";
  out << "    \"x\": {\"path\": \"" << json_escape(r.x_path) << "\", \"sha256\": \"" << r.x_sha256
      << "\"},\n";
  out << "    \"y\": {\"path\": \"" << json_escape(r.y_path) << "\", \"sha256\": \"" << r.y_sha256
      << "\"}\n";
  out << "  },\n";
  out << "  \"lhs\": " << fmt17(r.report.lhs) << ",\n";
  out << "  \"rhs_per_mode\": " << real_array(r.report.rhs_per_mode) << ",\n";
  out << "  \"gap_per_mode\": " << real_array(r.report.gap_per_mode) << ",\n";
  out << "  \"equality_per_mode\": " << flags << ",\n";
  out << "  \"equality_all_modes\": " << (r.report.equality_all_modes ? "true" : "false") << ",\n";
  out << "  \"tol\": " << fmt17(r.report.tol) << ",\n";
  out << "  \"scale\": " << fmt17(r.report.scale) << "\n";
  out << "}\n";
  write_text(path, out.str());
}

ReportFile read_report(const std::string& path) {
  const json j = parse_file(path);
  try {
    ReportFile r;
    r.version = field(j, "version", path).get<std::string>();
    const json& inputs = field(j, "inputs", path);
    const json& jx = field(inputs, "x", path);
    const json& jy = field(inputs, "y", path);
    r.x_path = field(jx, "path", path).get<std::string>();
    r.x_sha256 = field(jx, "sha256", path).get<std::string>();
    r.y_path = field(jy, "path", path).get<std::string>();
    r.y_sha256 = field(jy, "sha256", path).get<std::string>();
    r.report.lhs = field(j, "lhs", path).get<double>();
    r.report.rhs_per_mode = real_list(field(j, "rhs_per_mode", path), path + ": rhs_per_mode");
    r.report.gap_per_mode = real_list(field(j, "gap_per_mode", path), path + ": gap_per_mode");
    for (const auto& b : field(j, "equality_per_mode", path)) {
      if (!b.is_boolean()) throw ParseError(path + ": equality_per_mode must hold booleans");
      r.report.equality_per_mode.push_back(b.get<bool>());
    }
    r.report.equality_all_modes = field(j, "equality_all_modes", path).get<bool>();
    r.report.tol = field(j, "tol", path).get<double>();
    r.report.scale = field(j, "scale", path).get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_witness(const EqualityWitness& w, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

  json meta{{"version", kVersion},
            {"ratios", w.ratios},
            {"block_shapes", w.block_shapes},
            {"num_modes", w.factors_w.size()}};
  if (w.seed) meta["seed"] = *w.seed;
  if (!w.permutations.empty()) meta["permutations"] = w.permutations;
  write_text((fs::path(dir) / "witness.json").string(), meta.dump(2) + "\n");

  write_tensor(w.dx, (fs::path(dir) / "dx.json").string());
  write_tensor(w.dy, (fs::path(dir) / "dy.json").string());
  for (std::size_t d = 0; d < w.factors_w.size(); ++d) {
    write_matrix(w.factors_w[d],
                 (fs::path(dir) / ("factor_" + std::to_string(d + 1) + ".json")).string());
  }
}

EqualityWitness read_witness(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string meta_path = (fs::path(dir) / "witness.json").string();
  const json meta = parse_file(meta_path);

  const json& modes_field = field(meta, "num_modes", meta_path);
  if (!modes_field.is_number_integer() && !modes_field.is_number_unsigned()) {
    throw ParseError(meta_path + ": num_modes must be an integer");
  }
  const int num_modes = modes_field.get<int>();
  if (num_modes < 1) throw ParseError(meta_path + ": num_modes must be positive");
  std::vector<Matrix> factors;
  factors.reserve(num_modes);
  for (int d = 1; d <= num_modes; ++d) {
    factors.push_back(read_matrix((fs::path(dir) / ("factor_" + std::to_string(d) + ".json")).string()));
  }
  DenseTensor dx = read_tensor((fs::path(dir) / "dx.json").string());
  DenseTensor dy = read_tensor((fs::path(dir) / "dy.json").string());

  std::vector<std::vector<int>> block_shapes;
  for (const auto& b : field(meta, "block_shapes", meta_path)) {
    block_shapes.push_back(int_list(b, meta_path + ": block_shapes entry"));
  }
  std::vector<double> ratios = real_list(field(meta, "ratios", meta_path), meta_path + ": ratios");
  std::vector<std::vector<int>> permutations;
  if (auto it = meta.find("permutations"); it != meta.end()) {
    for (const auto& p : *it) {
      permutations.push_back(int_list(p, meta_path + ": permutations entry"));
    }
  }
  std::optional<std::uint64_t> seed;
  if (auto it = meta.find("seed"); it != meta.end()) {
    if (!it->is_number_unsigned()) throw ParseError(meta_path + ": seed must be nonnegative");
    seed = it->get<std::uint64_t>();
  }
  return EqualityWitness{std::move(factors), std::move(dx),    std::move(dy),
                         std::move(block_shapes), std::move(ratios), std::move(permutations),
                         seed};
}

void write_spectra(const HosvdFactors& f, double rank_tol, const std::string& path) {
  json j{{"spectra", f.spectra}, {"ranks", f.ranks}, {"rank_tol", rank_tol}};
  write_text(path, j.dump() + "\n");
}

std::string sha256_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw IoError("sha256: context allocation failed");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256: init failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got)) != 1) {
      EVP_MD_CTX_free(ctx);
      throw IoError("sha256: update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256: final failed");
  }
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace tvn
