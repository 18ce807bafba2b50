#pragma once

#include <string>

#include "hsforge/hsderiv.hpp"

namespace hsforge {

// Human-readable renderings (used by --pretty and in check reports). Not parseable.
std::string to_string(const Poly& p);
std::string to_string(const MultiIndex& m);
std::string to_string(const CoIdeal& c);
std::string to_string(const Series& s);
std::string to_string(const SubstMap& phi);
std::string to_string(const HSDeriv& d);

} // namespace hsforge
