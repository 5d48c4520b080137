#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "sgl/errors.hpp"

namespace sgl::dsl {

using cplx = std::complex<double>;

enum class NodeKind { Number, Imag, Var, Neg, Binary, Call, Bracket };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Expression AST. Bracket nodes hold vector/matrix literals: one row of scalar
/// expressions, or rows that are themselves Bracket nodes of scalars.
struct Node {
    NodeKind kind;
    double number = 0.0;          // Number
    std::string name;             // Var ident, Call name
    char op = 0;                  // Binary: + - * / ^
    std::vector<NodePtr> args;    // Neg: 1; Binary: 2; Call/Bracket: n
    int line = 1, col = 1;
};

/// Parse per the grammar
///   expr   <- term (('+'|'-') term)*
///   term   <- factor (('*'|'/') factor)*
///   factor <- unary ('^' factor)?        (right-associative)
///   unary  <- '-'? atom
///   atom   <- number | 'i' | ident | ident '(' args ')' | '(' expr ')' | '[' list ']'
/// Unknown identifiers and malformed input raise UnknownIdent / SyntaxError with
/// 1-based positions.
NodePtr parse_expr(const std::string& text);

/// Canonical text form; parse(print(ast)) yields an identical tree.
std::string print_expr(const NodePtr& ast);

/// Structural equality.
bool equal(const NodePtr& a, const NodePtr& b);

/// Evaluated value: a scalar, or an n-vector / n x n matrix with n <= 2.
struct Value {
    enum class Kind { Scalar, Vector, Matrix } kind = Kind::Scalar;
    int n = 1;                         // vector length / matrix side
    std::vector<cplx> entries{cplx{}}; // 1, n, or n*n entries (row-major)

    cplx scalar() const { return entries[0]; }
};

/// Evaluate at a point; r2 = x^2 + y^2. Non-finite results and type errors throw.
Value eval(const NodePtr& ast, double x, double y = 0.0);

/// Evaluate expecting a scalar result.
cplx eval_scalar(const NodePtr& ast, double x, double y = 0.0);

} // namespace sgl::dsl
