#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bisep/cli.hpp"

namespace bisep::cli {

json scalar_to_json(Scalar s, Field field) {
  if (field == Field::real) return s.real();
  return json::array({s.real(), s.imag()});
}

Scalar scalar_from_json(const json& j, Field field, const std::string& where) {
  auto finite = [&](double v) {
    if (!std::isfinite(v)) throw SchemaError(where, "non-finite number");
    return v;
  };
  if (field == Field::real) {
    if (!j.is_number()) throw SchemaError(where, "expected a number for a real-field entry");
    return {finite(j.get<double>()), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError(where, "expected a [re, im] pair for a complex-field entry");
  }
  return {finite(j[0].get<double>()), finite(j[1].get<double>())};
}

json matrix_to_json(const Matrix& m, Field field) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Field field, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows) {
    throw SchemaError(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw SchemaError(row_where, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)], field, row_where + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

namespace {

json header(const char* kind, Field field, Eigen::Index n_in, Eigen::Index n_out) {
  return json{{"kind", kind},
              {"field", to_string(field)},
              {"n_in", n_in},
              {"n_out", n_out},
              {"vec_convention", kVecConvention}};
}

const json& require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw SchemaError(key, "missing");
  return j.at(key);
}

std::string require_string(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw SchemaError(key, "expected a string");
  return v.get<std::string>();
}

Eigen::Index require_dim(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw SchemaError(key, "expected a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

DiscreteSpace require_space(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_array() || v.empty()) throw SchemaError(key, "expected a non-empty array of labels");
  std::vector<std::string> labels;
  for (const auto& l : v) {
    if (!l.is_string()) throw SchemaError(key, "labels must be strings");
    const auto s = l.get<std::string>();
    if (s.empty() || s.find('/') != std::string::npos) throw SchemaError(key, "label '" + s + "' is empty or contains '/'");
    labels.push_back(s);
  }
  try {
    return DiscreteSpace(std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(key, e.what());
  }
}

}  // namespace

json superop_to_json(const Superoperator& t) {
  json j = header("superop", t.cfg().field, t.n_in(), t.n_out());
  j["matrix"] = matrix_to_json(t.mat(), t.cfg().field);
  return j;
}

json big_superop_to_json(const BigSuperoperator& t) {
  const Field field = t.cfg().field;
  json j = header("big_superop", field, t.n_in(), t.n_out());
  j["points_in"] = t.points_in().labels();
  j["points_out"] = t.points_out().labels();
  json blocks = json::object();
  for (std::size_t x2 = 0; x2 < t.points_out().size(); ++x2) {
    for (std::size_t x1 = 0; x1 < t.points_in().size(); ++x1) {
      const Matrix& mat = t.block(x2, x1).mat();
      if (mat.isZero(0.0)) continue;
      blocks[t.points_out().label(x2) + "/" + t.points_in().label(x1)] = matrix_to_json(mat, field);
    }
  }
  j["blocks"] = std::move(blocks);
  return j;
}

json map_to_json(const AnyMap& map) {
  return std::visit(
      [](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Superoperator>) {
          return superop_to_json(t);
        } else {
          return big_superop_to_json(t);
        }
      },
      map);
}

AnyMap map_from_json(const json& j, FieldConfig cfg) {
  if (!j.is_object()) throw SchemaError("<root>", "expected a JSON object");
  const std::string kind = require_string(j, "kind");
  if (kind != "superop" && kind != "big_superop") throw SchemaError("kind", "must be \"superop\" or \"big_superop\"");
  try {
    cfg.field = field_from_string(require_string(j, "field"));
  } catch (const std::invalid_argument&) {
    throw SchemaError("field", "must be \"real\" or \"complex\"");
  }
  if (require_string(j, "vec_convention") != kVecConvention) {
    throw SchemaError("vec_convention", "only \"column-major\" is supported");
  }
  const Eigen::Index n_in = require_dim(j, "n_in");
  const Eigen::Index n_out = require_dim(j, "n_out");

  if (kind == "superop") {
    Matrix mat = matrix_from_json(require(j, "matrix"), cfg.field, n_out * n_out, n_in * n_in, "matrix");
    return Superoperator(n_in, n_out, std::move(mat), cfg);
  }

  DiscreteSpace points_in = require_space(j, "points_in");
  DiscreteSpace points_out = require_space(j, "points_out");
  const json& blocks_json = require(j, "blocks");
  if (!blocks_json.is_object()) throw SchemaError("blocks", "expected an object keyed \"x2/x1\"");
  std::vector<std::vector<Superoperator>> blocks(
      points_out.size(), std::vector<Superoperator>(points_in.size(), Superoperator::zero(n_in, n_out, cfg)));
  for (const auto& [key, value] : blocks_json.items()) {
    const std::string where = "blocks." + key;
    const auto slash = key.find('/');
    if (slash == std::string::npos) throw SchemaError(where, "key must look like \"x2/x1\"");
    std::size_t x2 = 0;
    std::size_t x1 = 0;
    try {
      x2 = points_out.index_of(key.substr(0, slash));
      x1 = points_in.index_of(key.substr(slash + 1));
    } catch (const std::out_of_range& e) {
      throw SchemaError(where, e.what());
    }
    blocks[x2][x1] = Superoperator(n_in, n_out, matrix_from_json(value, cfg.field, n_out * n_out, n_in * n_in, where), cfg);
  }
  return BigSuperoperator(std::move(points_in), std::move(points_out), n_in, n_out, std::move(blocks), cfg);
}

json conjugation_form_to_json(const ConjugationForm& form, Field field) {
  return json{{"alpha", scalar_to_json(form.alpha, field)}, {"S", matrix_to_json(form.s, field)}};
}

json pointwise_form_to_json(const PointwiseForm& form, const BigSuperoperator& t) {
  const Field field = t.cfg().field;
  json phi = json::object();
  json alpha = json::object();
  json s = json::object();
  for (std::size_t x2 = 0; x2 < form.phi.size(); ++x2) {
    const std::string& label = t.points_out().label(x2);
    phi[label] = t.points_in().label(form.phi[x2]);
    alpha[label] = scalar_to_json(form.alpha[x2], field);
    s[label] = matrix_to_json(form.s[x2], field);
  }
  return json{{"phi", phi}, {"alpha", alpha}, {"S", s}};
}

json ground_truth_to_json(const InstanceBundle& bundle) {
  json j{{"description", bundle.description}, {"seed", bundle.seed}};
  if (const auto* form = std::get_if<ConjugationForm>(&bundle.ground_truth)) {
    j["kind"] = "conjugation";
    j.update(conjugation_form_to_json(*form, bundle.superop().cfg().field));
  } else if (const auto* pform = std::get_if<PointwiseForm>(&bundle.ground_truth)) {
    j["kind"] = "pointwise";
    j.update(pointwise_form_to_json(*pform, bundle.big()));
  } else {
    j["kind"] = "none";
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw SchemaError("<root>", std::string("malformed JSON: ") + e.what());
  }
}

void write_text_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace bisep::cli
