#pragma once

#include "berkdyn/berkovich.hpp"

namespace berkdyn {

/// Map-expression parser: rational-coefficient expressions in the variable z
/// with + - * / ^ and parentheses, e.g. "(z^2 + 3/5)/(1 - 2*z)".
RatMap parse_map(const std::string& text, const Int& p);

/// Canonical rendering; parse_map(render_map(R)) == R.
std::string render_map(const RatMap& R);
std::string render_poly(const Poly& f);

/// Tree points as II(a, t) with rational entries, or I(x) with x a rational
/// or "inf".
BerkPoint parse_point(const std::string& text, const Int& p);

/// Annuli as "center;t_in;t_out".
Annulus parse_annulus(const std::string& text);

ProjPoint parse_proj_point(const std::string& text);

} // namespace berkdyn
