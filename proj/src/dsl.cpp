#include "sgl/dsl.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sgl::dsl {

namespace {

struct Token {
    enum Kind { Num, Ident, Op, LParen, RParen, LBracket, RBracket, Comma, End } kind;
    double number = 0.0;
    std::string text;
    char op = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_'))
                bump();
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Op;
                tok_.op = c;
                bump();
                return;
            case '(': tok_.kind = Token::LParen; bump(); return;
            case ')': tok_.kind = Token::RParen; bump(); return;
            case '[': tok_.kind = Token::LBracket; bump(); return;
            case ']': tok_.kind = Token::RBracket; bump(); return;
            case ',': tok_.kind = Token::Comma; bump(); return;
            default:
                throw SyntaxError(line_, col_, std::string("a token, got '") + c + "'");
        }
    }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            bump();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            int save_col = col_;
            bump();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    bump();
            } else {
                pos_ = save; // 'e' was an identifier: back off
                col_ = save_col;
            }
        }
        tok_.kind = Token::Num;
        tok_.text = src_.substr(start, pos_ - start);
        tok_.number = std::stod(tok_.text);
    }

    void bump() {
        ++pos_;
        ++col_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

bool known_var(const std::string& s) { return s == "x" || s == "y" || s == "r2"; }

int function_arity(const std::string& s) {
    if (s == "exp" || s == "sin" || s == "cos" || s == "sqrt" || s == "abs") return 1;
    if (s == "min" || s == "max") return 2;
    return -1;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NodePtr parse() {
        NodePtr e = expr(true);
        const Token& t = lex_.peek();
        if (t.kind != Token::End) throw SyntaxError(t.line, t.col, "end of input");
        return e;
    }

private:
    NodePtr expr(bool allow_bracket = false) {
        if (allow_bracket && lex_.peek().kind == Token::LBracket) return bracket();
        NodePtr lhs = term();
        while (lex_.peek().kind == Token::Op &&
               (lex_.peek().op == '+' || lex_.peek().op == '-')) {
            Token t = lex_.take();
            lhs = binary(t, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (lex_.peek().kind == Token::Op &&
               (lex_.peek().op == '*' || lex_.peek().op == '/')) {
            Token t = lex_.take();
            lhs = binary(t, lhs, factor());
        }
        return lhs;
    }

    NodePtr factor() {
        NodePtr base = unary();
        if (lex_.peek().kind == Token::Op && lex_.peek().op == '^') {
            Token t = lex_.take();
            return binary(t, base, factor()); // right-associative
        }
        return base;
    }

    NodePtr unary() {
        if (lex_.peek().kind == Token::Op && lex_.peek().op == '-') {
            Token t = lex_.take();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Neg;
            n->line = t.line;
            n->col = t.col;
            n->args.push_back(atom());
            return n;
        }
        return atom();
    }

    NodePtr atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Token::Num: {
                lex_.take();
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Number;
                n->number = t.number;
                n->line = t.line;
                n->col = t.col;
                return n;
            }
            case Token::Ident: {
                lex_.take();
                if (t.text == "i") {
                    auto n = std::make_shared<Node>();
                    n->kind = NodeKind::Imag;
                    n->line = t.line;
                    n->col = t.col;
                    return n;
                }
                if (lex_.peek().kind == Token::LParen) {
                    int arity = function_arity(t.text);
                    if (arity < 0) throw UnknownIdent(t.line, t.col, t.text);
                    lex_.take();
                    auto n = std::make_shared<Node>();
                    n->kind = NodeKind::Call;
                    n->name = t.text;
                    n->line = t.line;
                    n->col = t.col;
                    n->args.push_back(expr());
                    while (lex_.peek().kind == Token::Comma) {
                        lex_.take();
                        n->args.push_back(expr());
                    }
                    expect(Token::RParen, "')'");
                    if ((int)n->args.size() != arity)
                        throw SyntaxError(t.line, t.col,
                                          t.text + " to take " + std::to_string(arity) +
                                              " argument(s)");
                    return n;
                }
                if (!known_var(t.text)) throw UnknownIdent(t.line, t.col, t.text);
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Var;
                n->name = t.text;
                n->line = t.line;
                n->col = t.col;
                return n;
            }
            case Token::LParen: {
                lex_.take();
                NodePtr e = expr();
                expect(Token::RParen, "')'");
                return e;
            }
            case Token::LBracket:
                return bracket();
            default:
                throw SyntaxError(t.line, t.col, "a number, 'i', an identifier or '('");
        }
    }

    NodePtr bracket() {
        Token t = lex_.take(); // '['
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Bracket;
        n->line = t.line;
        n->col = t.col;
        n->args.push_back(expr(true));
        while (lex_.peek().kind == Token::Comma) {
            lex_.take();
            n->args.push_back(expr(true));
        }
        expect(Token::RBracket, "']'");
        return n;
    }

    NodePtr binary(const Token& t, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Binary;
        n->op = t.op;
        n->line = t.line;
        n->col = t.col;
        n->args.push_back(std::move(lhs));
        n->args.push_back(std::move(rhs));
        return n;
    }

    void expect(Token::Kind kind, const char* what) {
        const Token& t = lex_.peek();
        if (t.kind != kind) throw SyntaxError(t.line, t.col, what);
        lex_.take();
    }

    Lexer lex_;
};

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Binary:
            if (n.op == '+' || n.op == '-') return 1;
            if (n.op == '*' || n.op == '/') return 2;
            return 4; // '^'
        case NodeKind::Neg:
            return 3;
        default:
            return 5;
    }
}

void print_rec(std::ostream& os, const Node& n, int parent_prec, bool rhs_of_parent) {
    int prec = precedence(n);
    bool need_parens = prec < parent_prec ||
                       (prec == parent_prec && rhs_of_parent && n.kind == NodeKind::Binary &&
                        n.op != '^');
    if (need_parens) os << '(';
    switch (n.kind) {
        case NodeKind::Number: {
            std::ostringstream num;
            num.precision(17);
            num << n.number;
            os << num.str();
            break;
        }
        case NodeKind::Imag: os << 'i'; break;
        case NodeKind::Var: os << n.name; break;
        case NodeKind::Neg:
            os << '-';
            print_rec(os, *n.args[0], 5, false); // operand of '-' is an atom
            break;
        case NodeKind::Binary:
            // '^' is right-associative: its left operand is a factor-level atom.
            print_rec(os, *n.args[0], n.op == '^' ? prec + 1 : prec, false);
            os << n.op;
            print_rec(os, *n.args[1], prec, true);
            break;
        case NodeKind::Call:
            os << n.name << '(';
            for (std::size_t k = 0; k < n.args.size(); ++k) {
                if (k) os << ", ";
                print_rec(os, *n.args[k], 0, false);
            }
            os << ')';
            break;
        case NodeKind::Bracket:
            os << '[';
            for (std::size_t k = 0; k < n.args.size(); ++k) {
                if (k) os << ", ";
                print_rec(os, *n.args[k], 0, false);
            }
            os << ']';
            break;
    }
    if (need_parens) os << ')';
}

double real_arg(const cplx& z, const Node& n, const char* fn) {
    if (std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z.real())))
        throw Error(std::string(fn) + " needs (near-)real arguments at " +
                    std::to_string(n.line) + ":" + std::to_string(n.col));
    return z.real();
}

cplx eval_scalar_rec(const Node& n, double x, double y);

cplx integer_pow(cplx base, long long e) {
    if (e < 0) return 1.0 / integer_pow(base, -e);
    cplx r(1.0, 0.0);
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

cplx eval_scalar_rec(const Node& n, double x, double y) {
    switch (n.kind) {
        case NodeKind::Number: return cplx(n.number, 0.0);
        case NodeKind::Imag: return cplx(0.0, 1.0);
        case NodeKind::Var:
            if (n.name == "x") return cplx(x, 0.0);
            if (n.name == "y") return cplx(y, 0.0);
            return cplx(x * x + y * y, 0.0); // r2
        case NodeKind::Neg: return -eval_scalar_rec(*n.args[0], x, y);
        case NodeKind::Binary: {
            cplx a = eval_scalar_rec(*n.args[0], x, y);
            cplx b = eval_scalar_rec(*n.args[1], x, y);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: {
                    // Integer real exponents via repeated squaring, else principal power.
                    if (b.imag() == 0.0 && b.real() == std::floor(b.real()) &&
                        std::abs(b.real()) <= 1e9)
                        return integer_pow(a, (long long)b.real());
                    return std::pow(a, b);
                }
            }
        }
        case NodeKind::Call: {
            cplx a = eval_scalar_rec(*n.args[0], x, y);
            if (n.name == "exp") return std::exp(a);
            if (n.name == "sin") return std::sin(a);
            if (n.name == "cos") return std::cos(a);
            if (n.name == "sqrt") return std::sqrt(a);
            if (n.name == "abs") return cplx(std::abs(a), 0.0);
            cplx b = eval_scalar_rec(*n.args[1], x, y);
            double ra = real_arg(a, n, n.name.c_str());
            double rb = real_arg(b, n, n.name.c_str());
            if (n.name == "min") return cplx(std::min(ra, rb), 0.0);
            return cplx(std::max(ra, rb), 0.0);
        }
        case NodeKind::Bracket:
            throw Error("vector/matrix literal in a scalar slot at " + std::to_string(n.line) +
                        ":" + std::to_string(n.col));
    }
    return cplx(0.0, 0.0);
}

} // namespace

NodePtr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_expr(const NodePtr& ast) {
    std::ostringstream os;
    print_rec(os, *ast, 0, false);
    return os.str();
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Number: return a->number == b->number;
        case NodeKind::Imag: return true;
        case NodeKind::Var: return a->name == b->name;
        case NodeKind::Binary:
            if (a->op != b->op) return false;
            break;
        case NodeKind::Call:
            if (a->name != b->name) return false;
            break;
        default: break;
    }
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t k = 0; k < a->args.size(); ++k)
        if (!equal(a->args[k], b->args[k])) return false;
    return true;
}

Value eval(const NodePtr& ast, double x, double y) {
    Value out;
    if (ast->kind != NodeKind::Bracket) {
        out.kind = Value::Kind::Scalar;
        out.n = 1;
        out.entries = {eval_scalar_rec(*ast, x, y)};
    } else {
        const auto& rows = ast->args;
        bool matrix = rows[0]->kind == NodeKind::Bracket;
        int n = (int)rows.size();
        if (n < 1 || n > 2)
            throw Error("vector/matrix literals support dimensions 1 and 2 only");
        out.n = n;
        if (matrix) {
            out.kind = Value::Kind::Matrix;
            out.entries.assign(n * n, cplx{});
            for (int r = 0; r < n; ++r) {
                if (rows[r]->kind != NodeKind::Bracket || (int)rows[r]->args.size() != n)
                    throw Error("matrix literal rows must all have length " + std::to_string(n));
                for (int c = 0; c < n; ++c)
                    out.entries[r * n + c] = eval_scalar_rec(*rows[r]->args[c], x, y);
            }
        } else {
            out.kind = Value::Kind::Vector;
            out.entries.assign(n, cplx{});
            for (int r = 0; r < n; ++r) out.entries[r] = eval_scalar_rec(*rows[r], x, y);
        }
    }
    for (const cplx& z : out.entries)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("expression evaluates to a non-finite value at x=" + std::to_string(x) +
                        ", y=" + std::to_string(y));
    return out;
}

cplx eval_scalar(const NodePtr& ast, double x, double y) {
    Value v = eval(ast, x, y);
    if (v.kind != Value::Kind::Scalar) throw Error("expected a scalar expression");
    return v.scalar();
}

} // namespace sgl::dsl
