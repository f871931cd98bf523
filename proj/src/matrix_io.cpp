#include "adjfac/matrix_io.hpp"

namespace adjfac {

namespace {

json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

template <class S, class F>
json matrix_to_json(const Mat<S>& m, F&& entry) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

template <class S, class F>
Mat<S> matrix_from_json(const json& j, F&& entry) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw std::invalid_argument("matrix json: expected an object with rows, cols and entries");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw std::invalid_argument("matrix json: rows and cols must be integers");
  const auto rows = j["rows"].get<std::int64_t>();
  const auto cols = j["cols"].get<std::int64_t>();
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix json: dimensions must be positive");
  const json& entries = j["entries"];
  if (!entries.is_array() || static_cast<std::int64_t>(entries.size()) != rows)
    throw std::invalid_argument("matrix json: entries must have `rows` rows");
  Mat<S> out(rows, cols);
  for (std::int64_t r = 0; r < rows; ++r) {
    const json& row = entries[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != cols)
      throw std::invalid_argument("matrix json: row " + std::to_string(r) + " must have `cols` entries");
    for (std::int64_t c = 0; c < cols; ++c) out(r, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

Integer integer_from_json(const json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<std::int64_t>()), 10);
  if (v.is_string()) {
    const Rational r = parse_rational(v.get<std::string>());
    if (r.get_den() != 1) throw std::invalid_argument("matrix json: expected an integer entry");
    return r.get_num();
  }
  throw std::invalid_argument("matrix json: expected an integer entry");
}

}  // namespace

json to_json(const IntMatrix& m) { return matrix_to_json(m, integer_to_json); }

json to_json(const RatMatrix& m) {
  return matrix_to_json(m, [](const Rational& v) {
    if (v.get_den() == 1) return integer_to_json(v.get_num());
    return json(to_string(v));
  });
}

json to_json(const PolyMatrix& m) {
  return matrix_to_json(m, [](const Polynomial& v) { return json(to_string(v)); });
}

json to_json(const FpMatrix& m) {
  return matrix_to_json(m, [](const Fp& v) { return json(v.value()); });
}

IntMatrix int_matrix_from_json(const json& j) { return matrix_from_json<Integer>(j, integer_from_json); }

RatMatrix rat_matrix_from_json(const json& j) {
  return matrix_from_json<Rational>(j, [](const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    return Rational(integer_from_json(v));
  });
}

PolyMatrix poly_matrix_from_json(const json& j, int n) {
  return matrix_from_json<Polynomial>(j, [n](const json& v) {
    if (v.is_string()) return parse_polynomial(v.get<std::string>(), n);
    return Polynomial(integer_from_json(v));
  });
}

}  // namespace adjfac
