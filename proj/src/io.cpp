#include "gcnet/io.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gcnet/error.hpp"
#include "gcnet/format.hpp"

namespace gcnet {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  out << "n " << g.size() << '\n';
  for (const Edge& e : g.edges()) out << (e.from + 1) << ' ' << (e.to + 1) << '\n';
}

DirectedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::optional<DirectedGraph> g;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!g) {
      std::string tag;
      long long n = -1;
      if (!(ls >> tag >> n) || tag != "n" || n < 0) {
        throw InputError("edge list: expected header 'n <count>'", row);
      }
      g.emplace(static_cast<std::size_t>(n));
      continue;
    }
    long long from = 0;
    long long to = 0;
    std::string extra;
    if (!(ls >> from >> to) || (ls >> extra)) {
      throw InputError("edge list: expected 'j i'", row);
    }
    if (from < 1 || to < 1 || static_cast<std::size_t>(from) > g->size() ||
        static_cast<std::size_t>(to) > g->size() || from == to) {
      throw InputError("edge list: invalid edge " + std::to_string(from) + " " + std::to_string(to), row);
    }
    g->add_edge(static_cast<Node>(from - 1), static_cast<Node>(to - 1));
  }
  if (!g) throw InputError("edge list: missing header");
  return *g;
}

void write_series_csv(std::ostream& out, const SeriesMatrix& x, bool header) {
  const auto& v = x.values();
  if (header) {
    for (Eigen::Index i = 0; i < v.cols(); ++i) out << (i ? "," : "") << 'x' << (i + 1);
    out << '\n';
  }
  std::string line;
  for (Eigen::Index t = 0; t < v.rows(); ++t) {
    line.clear();
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
      if (i) line += ',';
      line += format_double(v(t, i));
    }
    line += '\n';
    out << line;
  }
}

SeriesMatrix read_series_csv(std::istream& in, bool header) {
  std::string line;
  std::size_t row = 0;
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header && row == 1) continue;
    if (line.empty()) continue;
    std::size_t col = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t end = std::min(line.find(',', start), line.size());
      ++col;
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
      double value = 0.0;
      const auto res = std::from_chars(first, last, value);
      if (first == last || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
        throw InputError("series csv: bad number '" + std::string(first, last) + "'", row, col);
      }
      data.push_back(value);
      if (end == line.size()) break;
      start = end + 1;
    }
    if (rows == 0) {
      cols = col;
    } else if (col != cols) {
      throw InputError("series csv: expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(col),
                       row, col);
    }
    ++rows;
  }
  if (rows == 0) throw InputError("series csv: no data rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t i = 0; i < cols; ++i) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = data[t * cols + i];
    }
  }
  return SeriesMatrix(std::move(values));
}

nlohmann::json model_to_json(const VarModel& m) {
  nlohmann::json j;
  j["n"] = m.dim();
  j["p"] = m.order();
  auto coeffs = nlohmann::json::array();
  for (const auto& b : m.coeffs()) {
    auto mat = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      auto row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
      mat.push_back(std::move(row));
    }
    coeffs.push_back(std::move(mat));
  }
  j["coeffs"] = std::move(coeffs);
  j["noise_vars"] = std::vector<double>(m.noise_vars().data(),
                                        m.noise_vars().data() + m.noise_vars().size());
  auto edges = nlohmann::json::array();
  for (const Edge& e : m.topology().edges()) edges.push_back({e.from + 1, e.to + 1});
  j["edges"] = std::move(edges);
  return j;
}

VarModel model_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto p = j.at("p").get<std::size_t>();
    const auto& cj = j.at("coeffs");
    if (cj.size() != p) throw InputError("model json: coeffs must hold p matrices");
    std::vector<Eigen::MatrixXd> coeffs;
    for (const auto& mat : cj) {
      if (mat.size() != n) throw InputError("model json: coefficient matrix must have n rows");
      Eigen::MatrixXd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < n; ++r) {
        if (mat[r].size() != n) throw InputError("model json: coefficient row must have n entries");
        for (std::size_t c = 0; c < n; ++c) {
          b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = mat[r][c].get<double>();
        }
      }
      coeffs.push_back(std::move(b));
    }
    const auto nv = j.at("noise_vars").get<std::vector<double>>();
    if (nv.size() != n) throw InputError("model json: noise_vars must have n entries");
    DirectedGraph g(n);
    for (const auto& e : j.at("edges")) {
      const auto from = e.at(0).get<std::size_t>();
      const auto to = e.at(1).get<std::size_t>();
      if (from < 1 || to < 1 || from > n || to > n || from == to) {
        throw InputError("model json: invalid edge");
      }
      g.add_edge(from - 1, to - 1);
    }
    return VarModel(std::move(coeffs), Eigen::Map<const Eigen::VectorXd>(nv.data(), nv.size()),
                    std::move(g));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("model json: ") + e.what());
  }
}

}  // namespace gcnet
