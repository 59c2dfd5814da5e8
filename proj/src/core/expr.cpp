#include "expr.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace hardy {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_num(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw GridError("expr: bad number '" + s + "'");
    return v;
  } catch (const GridError&) {
    throw;
  } catch (const std::exception&) {
    throw GridError("expr: bad number '" + s + "'");
  }
}

std::vector<double> nums(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(to_num(tok));
  return out;
}

double radius(double x, double y, int dim) {
  return dim == 1 ? std::abs(x) : std::sqrt(x * x + y * y);
}

std::function<double(double, double)> parse_term(const std::string& term, int dim) {
  auto colon = term.find(':');
  if (colon == std::string::npos) throw GridError("expr: missing ':' in '" + term + "'");
  std::string kind = term.substr(0, colon);
  std::string rest = term.substr(colon + 1);

  if (kind == "const") {
    double c = to_num(rest);
    return [c](double, double) { return c; };
  }
  if (kind == "power") {
    double a = to_num(rest);
    return [a, dim](double x, double y) { return std::pow(radius(x, y, dim), a); };
  }
  if (kind == "indicator") {
    auto v = nums(rest);
    if (dim == 1) {
      if (v.size() != 2) throw GridError("expr: indicator needs 2 bounds in 1D");
      return [v](double x, double) { return (x >= v[0] && x < v[1]) ? 1.0 : 0.0; };
    }
    if (v.size() != 4) throw GridError("expr: indicator needs 4 bounds in 2D");
    return [v](double x, double y) {
      return (x >= v[0] && x < v[1] && y >= v[2] && y < v[3]) ? 1.0 : 0.0;
    };
  }
  if (kind == "bump") {
    auto v = nums(rest);
    if (v.size() != 3) throw GridError("expr: bump needs center,width,amp");
    double c = v[0], w = v[1], amp = v[2];
    return [c, w, amp, dim](double x, double y) {
      double r = radius(x - c, dim == 2 ? y - c : 0.0, dim) / w;
      double r2 = r * r;
      return r2 < 1.0 ? amp * std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
  }
  if (kind == "log") {
    auto v = nums(rest);
    if (v.size() != 2) throw GridError("expr: log needs c1,c2");
    double c1 = v[0], c2 = v[1];
    return [c1, c2, dim](double x, double y) {
      return c1 + c2 / std::log(std::exp(1.0) + radius(x, y, dim));
    };
  }
  if (kind == "pc") {
    // pc:<default>;<a>,<b>:<v>;...  pieces override the default in order
    auto pieces = split(rest, ';');
    if (pieces.empty()) throw GridError("expr: pc needs a default value");
    double dflt = to_num(pieces[0]);
    struct Piece {
      std::vector<double> box;
      double val;
    };
    std::vector<Piece> ps;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      auto c2 = pieces[i].rfind(':');
      if (c2 == std::string::npos) throw GridError("expr: pc piece missing value");
      Piece p;
      p.box = nums(pieces[i].substr(0, c2));
      p.val = to_num(pieces[i].substr(c2 + 1));
      std::size_t want = dim == 1 ? 2 : 4;
      if (p.box.size() != want) throw GridError("expr: pc piece has wrong bound count");
      ps.push_back(std::move(p));
    }
    return [dflt, ps, dim](double x, double y) {
      double v = dflt;
      for (const auto& p : ps) {
        bool in = x >= p.box[0] && x < p.box[1];
        if (dim == 2) in = in && y >= p.box[2] && y < p.box[3];
        if (in) v = p.val;
      }
      return v;
    };
  }
  throw GridError("expr: unknown kind '" + kind + "'");
}

}  // namespace

std::function<double(double, double)> parse_scalar_expr(const std::string& expr, int dim) {
  auto terms = split(expr, '+');
  if (terms.empty()) throw GridError("expr: empty expression");
  std::vector<std::function<double(double, double)>> fs;
  for (const auto& t : terms) fs.push_back(parse_term(t, dim));
  if (fs.size() == 1) return fs[0];
  return [fs](double x, double y) {
    double s = 0;
    for (const auto& f : fs) s += f(x, y);
    return s;
  };
}

GridFunction sample_expr(const GridSpec& spec, const std::string& expr) {
  return GridFunction::sample(spec, parse_scalar_expr(expr, spec.dim()));
}

}  // namespace hardy
