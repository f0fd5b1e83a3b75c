#include "cmc/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cmc {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "cmc-dataset/1";

void check_new_role(const DatasetFile& ds, const std::string& role,
                    const char* type, const GridChart& chart) {
  if (role_type(role) != type)
    throw Error(ErrorCode::BadParameter,
                "role '" + role + "' stores " + role_type(role) +
                    " data, not " + type);
  if (find_field(ds, role))
    throw Error(ErrorCode::BadParameter, "duplicate role '" + role + "'");
  if (!ds.chart.same_as(chart))
    throw Error(ErrorCode::DimensionMismatch,
                "field chart differs from dataset chart");
}

void check_finite(double v, const std::string& role) {
  if (!std::isfinite(v))
    throw Error(ErrorCode::BadParameter,
                "non-finite sample in field '" + role + "'");
}

json real_array(const std::vector<double>& v, const std::string& role) {
  json a = json::array();
  for (double x : v) {
    check_finite(x, role);
    a.push_back(x);
  }
  return a;
}

json mask_array(const std::vector<unsigned char>& m) {
  json a = json::array();
  for (unsigned char b : m) a.push_back(int(b));
  return a;
}

const json& need_key(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorCode::MissingField,
                std::string(where) + " lacks '" + key + "'");
  return *it;
}

double need_number(const json& j, const char* key, const char* where) {
  const json& v = need_key(j, key, where);
  if (!v.is_number())
    throw Error(ErrorCode::BadParameter,
                std::string(where) + " key '" + key + "' is not a number");
  return v.get<double>();
}

std::vector<double> read_values(const json& j, const char* key,
                                std::size_t want, const std::string& role) {
  const json& a = need_key(j, key, ("field '" + role + "'").c_str());
  if (!a.is_array())
    throw Error(ErrorCode::BadParameter,
                "field '" + role + "' key '" + key + "' is not an array");
  if (a.size() != want)
    throw Error(ErrorCode::DimensionMismatch,
                "field '" + role + "' has " + std::to_string(a.size()) +
                    " samples, chart wants " + std::to_string(want));
  std::vector<double> out(want);
  for (std::size_t k = 0; k < want; ++k) {
    if (!a[k].is_number())
      throw Error(ErrorCode::BadParameter,
                  "field '" + role + "' holds a non-numeric sample");
    out[k] = a[k].get<double>();
  }
  return out;
}

std::vector<unsigned char> read_mask(const json& j, std::size_t want,
                                     const std::string& role) {
  const json& a = need_key(j, "mask", ("field '" + role + "'").c_str());
  if (!a.is_array() || a.size() != want)
    throw Error(ErrorCode::DimensionMismatch,
                "field '" + role + "' mask length mismatch");
  std::vector<unsigned char> out(want);
  for (std::size_t k = 0; k < want; ++k) {
    if (!a[k].is_number_integer() ||
        (a[k].get<int>() != 0 && a[k].get<int>() != 1))
      throw Error(ErrorCode::BadParameter,
                  "field '" + role + "' mask holds values other than 0/1");
    out[k] = static_cast<unsigned char>(a[k].get<int>());
  }
  return out;
}

}  // namespace

std::string role_type(const std::string& role) {
  if (role == "psi1" || role == "psi2" || role == "rho" || role == "Q" ||
      role == "eta" || role == "sqrtQ")
    return "complex";
  if (role == "p" || role == "H" || role == "R") return "real";
  if (role == "n" || role == "r") return "vec3";
  throw Error(ErrorCode::BadParameter, "unknown field role '" + role + "'");
}

DatasetFile make_dataset(const GridChart& chart) {
  chart.validate();
  DatasetFile ds;
  ds.chart = chart;
  return ds;
}

void add_field(DatasetFile& ds, const std::string& role,
               const ComplexField& f) {
  check_new_role(ds, role, "complex", f.chart);
  DatasetField out;
  out.role = role;
  out.c = f;
  ds.fields.push_back(std::move(out));
}

void add_field(DatasetFile& ds, const std::string& role, const RealField& f) {
  check_new_role(ds, role, "real", f.chart);
  DatasetField out;
  out.role = role;
  out.r = f;
  ds.fields.push_back(std::move(out));
}

void add_field(DatasetFile& ds, const std::string& role, const Vec3Field& f) {
  check_new_role(ds, role, "vec3", f.chart);
  DatasetField out;
  out.role = role;
  out.v = f;
  ds.fields.push_back(std::move(out));
}

const DatasetField* find_field(const DatasetFile& ds,
                               const std::string& role) {
  for (const DatasetField& f : ds.fields)
    if (f.role == role) return &f;
  return nullptr;
}

const ComplexField& need_complex(const DatasetFile& ds,
                                 const std::string& role) {
  const DatasetField* f = find_field(ds, role);
  if (!f || role_type(role) != "complex")
    throw Error(ErrorCode::MissingField,
                "dataset lacks complex field '" + role + "'");
  return f->c;
}

const RealField& need_real(const DatasetFile& ds, const std::string& role) {
  const DatasetField* f = find_field(ds, role);
  if (!f || role_type(role) != "real")
    throw Error(ErrorCode::MissingField,
                "dataset lacks real field '" + role + "'");
  return f->r;
}

const Vec3Field& need_vec3(const DatasetFile& ds, const std::string& role) {
  const DatasetField* f = find_field(ds, role);
  if (!f || role_type(role) != "vec3")
    throw Error(ErrorCode::MissingField,
                "dataset lacks vec3 field '" + role + "'");
  return f->v;
}

std::string serialize_dataset(const DatasetFile& ds) {
  json j;
  j["format"] = kFormat;
  j["chart"] = {{"x_min", ds.chart.x_min}, {"x_max", ds.chart.x_max},
                {"y_min", ds.chart.y_min}, {"y_max", ds.chart.y_max},
                {"nx", ds.chart.nx},       {"ny", ds.chart.ny}};
  json fields = json::array();
  for (const DatasetField& f : ds.fields) {
    json e;
    e["role"] = f.role;
    std::string type = role_type(f.role);
    e["type"] = type;
    if (type == "complex") {
      std::vector<double> re(f.c.values.size()), im(f.c.values.size());
      for (std::size_t k = 0; k < f.c.values.size(); ++k) {
        re[k] = f.c.values[k].real();
        im[k] = f.c.values[k].imag();
      }
      e["re"] = real_array(re, f.role);
      e["im"] = real_array(im, f.role);
      e["mask"] = mask_array(f.c.mask);
    } else if (type == "real") {
      e["values"] = real_array(f.r.values, f.role);
      e["mask"] = mask_array(f.r.mask);
    } else {
      e["x"] = real_array(f.v.x, f.role);
      e["y"] = real_array(f.v.y, f.role);
      e["z"] = real_array(f.v.z, f.role);
      e["mask"] = mask_array(f.v.mask);
    }
    fields.push_back(std::move(e));
  }
  j["fields"] = std::move(fields);
  j["provenance"] = ds.provenance;
  return j.dump() + "\n";
}

DatasetFile parse_dataset(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::BadParameter, "dataset is not valid JSON");
  if (!j.is_object())
    throw Error(ErrorCode::BadParameter, "dataset is not a JSON object");

  const json& fmt = need_key(j, "format", "dataset");
  if (!fmt.is_string() || fmt.get<std::string>() != kFormat)
    throw Error(ErrorCode::UnknownVersion,
                "expected format '" + std::string(kFormat) + "'");

  const json& cj = need_key(j, "chart", "dataset");
  GridChart chart;
  chart.x_min = need_number(cj, "x_min", "chart");
  chart.x_max = need_number(cj, "x_max", "chart");
  chart.y_min = need_number(cj, "y_min", "chart");
  chart.y_max = need_number(cj, "y_max", "chart");
  chart.nx = static_cast<std::size_t>(need_number(cj, "nx", "chart"));
  chart.ny = static_cast<std::size_t>(need_number(cj, "ny", "chart"));
  chart.validate();

  DatasetFile ds = make_dataset(chart);
  const json& fields = need_key(j, "fields", "dataset");
  if (!fields.is_array())
    throw Error(ErrorCode::BadParameter, "'fields' is not an array");
  const std::size_t sz = chart.size();
  for (const json& e : fields) {
    const json& rj = need_key(e, "role", "field");
    if (!rj.is_string())
      throw Error(ErrorCode::BadParameter, "field role is not a string");
    std::string role = rj.get<std::string>();
    std::string type = role_type(role);
    const json& tj = need_key(e, "type", "field");
    if (!tj.is_string() || tj.get<std::string>() != type)
      throw Error(ErrorCode::BadParameter,
                  "field '" + role + "' carries the wrong type tag");
    if (type == "complex") {
      std::vector<double> re = read_values(e, "re", sz, role);
      std::vector<double> im = read_values(e, "im", sz, role);
      ComplexField f(chart);
      for (std::size_t k = 0; k < sz; ++k)
        f.values[k] = Complex(re[k], im[k]);
      f.mask = read_mask(e, sz, role);
      add_field(ds, role, f);
    } else if (type == "real") {
      RealField f(chart);
      f.values = read_values(e, "values", sz, role);
      f.mask = read_mask(e, sz, role);
      add_field(ds, role, f);
    } else {
      Vec3Field f(chart);
      f.x = read_values(e, "x", sz, role);
      f.y = read_values(e, "y", sz, role);
      f.z = read_values(e, "z", sz, role);
      f.mask = read_mask(e, sz, role);
      add_field(ds, role, f);
    }
  }

  auto pit = j.find("provenance");
  if (pit != j.end()) ds.provenance = *pit;
  return ds;
}

void write_dataset(const DatasetFile& ds, const std::string& path) {
  std::string bytes = serialize_dataset(ds);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::BadParameter, "cannot open '" + path + "'");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out)
    throw Error(ErrorCode::BadParameter, "short write to '" + path + "'");
}

DatasetFile read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::BadParameter, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

}  // namespace cmc
