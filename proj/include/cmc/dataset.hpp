#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cmc/grid.hpp"

namespace cmc {

// One named grid field inside a dataset. The role decides the value type,
// so only the member matching type() carries data.
struct DatasetField {
  std::string role;
  ComplexField c;
  RealField r;
  Vec3Field v;
};

// Role -> value type; throws BadParameter for roles outside the format.
// complex: psi1 psi2 rho Q eta sqrtQ   real: p H R   vec3: n r
std::string role_type(const std::string& role);

// Self-describing JSON document: format tag, chart metadata, named fields
// each with flat row-major arrays plus a 0/1 mask, and a free-form
// provenance block (generator, parameters, conventions, branch bookkeeping).
// Serialization is canonical, so serialize(parse(text)) == text.
struct DatasetFile {
  GridChart chart;
  std::vector<DatasetField> fields;
  nlohmann::json provenance = nlohmann::json::object();
};

DatasetFile make_dataset(const GridChart& chart);

// Appends a field; the role must be new, typed correctly, and on the
// dataset chart (DimensionMismatch / BadParameter otherwise).
void add_field(DatasetFile& ds, const std::string& role,
               const ComplexField& f);
void add_field(DatasetFile& ds, const std::string& role, const RealField& f);
void add_field(DatasetFile& ds, const std::string& role, const Vec3Field& f);

// Null when the role is absent.
const DatasetField* find_field(const DatasetFile& ds, const std::string& role);

// Typed access that throws MissingField when the role is absent.
const ComplexField& need_complex(const DatasetFile& ds,
                                 const std::string& role);
const RealField& need_real(const DatasetFile& ds, const std::string& role);
const Vec3Field& need_vec3(const DatasetFile& ds, const std::string& role);

// Canonical bytes: alphabetical object keys, shortest exact decimal for
// every double, field array in insertion order, one trailing newline.
// Throws BadParameter on non-finite samples (JSON has no spelling for them).
std::string serialize_dataset(const DatasetFile& ds);

// Errors: BadParameter (not JSON / wrong structure), UnknownVersion,
// MissingField, DimensionMismatch (array length vs chart).
DatasetFile parse_dataset(const std::string& text);

void write_dataset(const DatasetFile& ds, const std::string& path);
DatasetFile read_dataset(const std::string& path);

}  // namespace cmc
