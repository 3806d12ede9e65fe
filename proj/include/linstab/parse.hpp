#pragma once

#include <string_view>
#include <variant>

#include "linstab/epset.hpp"
#include "linstab/linops.hpp"
#include "linstab/residue.hpp"
#include "linstab/surd.hpp"
#include "linstab/truncated.hpp"

namespace linstab {

using SetValue = std::variant<EPSet, TruncatedSet>;

// Set grammar (whitespace-insensitive):
//   set   := 'Z' | 'N' | '{' [int {',' int}] '}' | 'AP(' int ',' int ')'
//          | 'AP+(' int ',' int ',' int ')' | 'AP-(' int ',' int ',' int ')'
//          | 'U(' set {',' set} ')'
//          | 'bohr(' surd ',' rational ',' int ')' | 'sparse(' rational {',' rational} ')'
//          | 'sparse_ii(' rational ',' int ')'
// Construction calls give truncated sets and may only appear at the top level.
SetValue parse_set_expression(std::string_view text, const Limits& limits = default_limits());

/// Like parse_set_expression but rejects truncated constructions.
EPSet parse_epset(std::string_view text, const Limits& limits = default_limits());

//   ops := item {item} | 'cyc[' item {item} ']'     item := '(' int ',' int ')' ['^' int]
OpSequence parse_ops(std::string_view text);

//   'mod' int '{' [int {',' int}] '}'
ResidueSet parse_residue_set(std::string_view text);

//   int ['/' int] | decimal
Rational parse_rational(std::string_view text);

//   sums, differences, products and quotients of rationals and sqrt(int), with parentheses
Surd parse_surd(std::string_view text);

std::string to_string(const SetValue& v);

}  // namespace linstab
