#pragma once

#include "exactalg/element.h"

#include <string>

namespace exactalg {

// Textual form: sum := (+ term*), term := (mon coeff factor*),
// factor := (kind index power).  Zero prints as "(+)".  Rationals print as
// "a/b" (plain "a" for integers).  parse(print(e)) == e.
std::string to_sexpr(const Element& e);
Element parse_sexpr(const std::string& text, PresPtr pres);

struct parse_error : algebra_error {
    using algebra_error::algebra_error;
};

}  // namespace exactalg
