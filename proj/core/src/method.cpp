#include "symplectic/method.hpp"

#include <array>
#include <string>

namespace symplectic {

namespace {

struct SchemeInfo {
  Scheme scheme;
  std::string_view name;
  int order;
  bool symplectic;
  bool alpha;
  double default_alpha;
};

constexpr std::array<SchemeInfo, 11> kSchemes{{
    {Scheme::euler_a_31, "euler-a-3.1", 1, true, true, 0.5},
    {Scheme::euler_b_33, "euler-b-3.3", 1, true, true, 0.5},
    {Scheme::second_41, "second-4.1", 2, true, true, 1.0 / 3.0},
    {Scheme::second_43, "second-4.3", 2, true, false, 0.5},
    {Scheme::implicit1_51, "first-5.1", 1, true, true, 0.5},
    {Scheme::implicit2_61, "second-6.1", 2, true, true, 0.0},
    {Scheme::ndof1_73, "ndof-7.3", 1, true, true, 0.5},
    {Scheme::ndof2_74, "ndof-7.4", 2, true, true, 0.0},
    {Scheme::leapfrog_75, "leapfrog-7.5", 2, true, false, 0.5},
    {Scheme::baseline_euler, "baseline-euler", 1, false, false, 0.0},
    {Scheme::baseline_rk4, "baseline-rk4", 4, false, false, 0.0},
}};

const SchemeInfo& info(Scheme scheme) {
  for (const auto& s : kSchemes) {
    if (s.scheme == scheme) return s;
  }
  throw Error(ErrorCode::invalid_argument, "unknown scheme");
}

}  // namespace

std::string_view scheme_name(Scheme scheme) { return info(scheme).name; }

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (const auto& s : kSchemes) {
    if (s.name == name) return s.scheme;
  }
  return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> all = [] {
    std::vector<Scheme> v;
    for (const auto& s : kSchemes) v.push_back(s.scheme);
    return v;
  }();
  return all;
}

const std::vector<Scheme>& symplectic_schemes() {
  static const std::vector<Scheme> v = [] {
    std::vector<Scheme> out;
    for (const auto& s : kSchemes) {
      if (s.symplectic) out.push_back(s.scheme);
    }
    return out;
  }();
  return v;
}

int nominal_order(Scheme scheme) { return info(scheme).order; }
bool is_symplectic(Scheme scheme) { return info(scheme).symplectic; }
bool uses_alpha(Scheme scheme) { return info(scheme).alpha; }
double default_alpha(Scheme scheme) { return info(scheme).default_alpha; }

bool requires_scalar_second_order(Scheme scheme) {
  return scheme == Scheme::euler_a_31 || scheme == Scheme::euler_b_33 ||
         scheme == Scheme::second_41 || scheme == Scheme::second_43;
}

bool requires_separable(Scheme scheme) { return scheme == Scheme::leapfrog_75; }

bool supports_swap(Scheme scheme) {
  return scheme == Scheme::implicit1_51 || scheme == Scheme::implicit2_61;
}

MethodSpec make_method(Scheme scheme) {
  MethodSpec m;
  m.scheme = scheme;
  m.alpha = default_alpha(scheme);
  return m;
}

void validate(const MethodSpec& method) {
  if (!(method.alpha >= 0.0 && method.alpha <= 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "alpha must lie in [0, 1], got " + std::to_string(method.alpha));
  }
  if (method.swap_xy && !supports_swap(method.scheme)) {
    throw Error(ErrorCode::invalid_argument,
                "swap_xy is only defined for first-5.1 and second-6.1, not " +
                    std::string(scheme_name(method.scheme)));
  }
  validate(method.solver);
}

}  // namespace symplectic
