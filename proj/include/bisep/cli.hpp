#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bisep/funcalg.hpp"
#include "bisep/harness.hpp"
#include "bisep/structure.hpp"

namespace bisep::cli {

using json = nlohmann::json;

// Exit codes shared by every command.
enum ExitCode : int {
  kExitPass = 0,
  kExitIoOrSchema = 1,
  kExitPropertyFails = 2,
  kExitNotInvertible = 3,
};

inline constexpr const char* kVecConvention = "column-major";

// Raised for malformed instance files; the message names the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& problem)
      : std::runtime_error("field '" + field + "': " + problem), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// --- JSON encoding of numbers and matrices ---------------------------------
// Real-field scalars are bare numbers; complex-field scalars are [re, im].

json scalar_to_json(Scalar s, Field field);
Scalar scalar_from_json(const json& j, Field field, const std::string& where);

// Row-major nested arrays: j[r][c].
json matrix_to_json(const Matrix& m, Field field);
Matrix matrix_from_json(const json& j, Field field, Eigen::Index rows, Eigen::Index cols, const std::string& where);

// --- Instance files -------------------------------------------------------

json superop_to_json(const Superoperator& t);
json big_superop_to_json(const BigSuperoperator& t);
json map_to_json(const AnyMap& map);

// Validates against the instance schema; cfg supplies tolerances and the
// field is taken from the file.
AnyMap map_from_json(const json& j, FieldConfig cfg);

json conjugation_form_to_json(const ConjugationForm& form, Field field);
json pointwise_form_to_json(const PointwiseForm& form, const BigSuperoperator& t);
json ground_truth_to_json(const InstanceBundle& bundle);

// --- Output ---------------------------------------------------------------

// Serializes with every floating-point number printed to 17 significant digits.
std::string dump(const json& j, int indent = 2);

json read_json_file(const std::string& path);
// Writes to a temporary sibling and renames it into place.
void write_text_file_atomic(const std::string& path, const std::string& text);

// --- Entry point ------------------------------------------------------------

// args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bisep::cli
