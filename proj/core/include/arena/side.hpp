#pragma once

#include <string_view>

namespace arena {

enum class Side { Ai, User };

std::string_view to_string(Side s);
Side parse_side(std::string_view text);
inline Side opponent(Side s) { return s == Side::Ai ? Side::User : Side::Ai; }

enum class Position { For, Against };

std::string_view to_string(Position p);
/// Accepts exactly "for" or "against"; anything else is invalid-argument.
Position parse_position(std::string_view text);
inline Position complement(Position p) { return p == Position::For ? Position::Against : Position::For; }

}  // namespace arena
