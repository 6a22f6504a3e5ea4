#pragma once

// Internal lexer / recursive-descent scaffolding shared by the MSO and FO
// grammars.  Not installed.

#include <string>
#include <vector>

#include "gca/error.hpp"
#include "gca/formula.hpp"

namespace gca::parse {

struct Token {
  enum Type { Ident, Number, Sym, End } type = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) {
    int line = 1, col = 1;
    size_t i = 0;
    auto is_ident = [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
             (c >= '0' && c <= '9') || c == '_' || c == '\'';
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++col;
        ++i;
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (c >= '0' && c <= '9') {
        t.type = Token::Number;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9')
          t.text += text[i++];
      } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                 c == '_') {
        t.type = Token::Ident;
        while (i < text.size() && is_ident(text[i])) t.text += text[i++];
      } else {
        t.type = Token::Sym;
        auto two = text.substr(i, 2);
        if (two == "->" || two == "=>" || two == ">=" || two == "!=") {
          t.text = two;
          i += 2;
        } else if (c == '~') {
          if (text.substr(i, 4) != "~inf")
            throw ParseError(line, col, "expected ~inf");
          t.text = "~inf";
          i += 4;
        } else if (c == '#') {
          if (text.substr(i, 9) != "#siblings")
            throw ParseError(line, col, "expected #siblings");
          t.text = "#siblings";
          i += 9;
        } else if (std::string("()[]{}.,=>&|!%").find(c) !=
                   std::string::npos) {
          t.text = c;
          i += 1;
        } else {
          throw ParseError(line, col,
                           std::string("unexpected character '") + c + "'");
        }
      }
      col = t.col + static_cast<int>(t.text.size());
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.type = Token::End;
    end.text = "end of input";
    end.line = line;
    end.col = col;
    tokens_.push_back(std::move(end));
  }

  const Token& peek(size_t ahead = 0) const {
    size_t idx = pos_ + ahead;
    return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept_sym(const std::string& s) {
    if (peek().type == Token::Sym && peek().text == s) {
      next();
      return true;
    }
    return false;
  }

private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

[[noreturn]] inline void fail(const Token& at, const std::string& msg) {
  throw ParseError(at.line, at.col, msg + " (got \"" + at.text + "\")");
}

inline bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "in" || s == "lab" ||
         s == "edge" || s == "npre" || s == "true" || s == "false";
}

/// Quantifier / connective levels shared by both grammars; Derived supplies
/// parse_atom() and may restrict variable sorts via check_var.
template <typename Derived, typename A>
struct ParserBase {
  Lexer lex;

  explicit ParserBase(const std::string& text) : lex(text) {}
  Derived& self() { return static_cast<Derived&>(*this); }

  std::string expect_var() {
    const Token& t = lex.peek();
    if (t.type != Token::Ident || is_keyword(t.text))
      fail(t, "expected a variable name");
    self().check_var(t);
    return lex.next().text;
  }
  void expect_sym(const std::string& s) {
    if (!lex.accept_sym(s)) fail(lex.peek(), "expected \"" + s + "\"");
  }

  Formula<A> parse_formula() {
    const Token& t = lex.peek();
    if (t.type == Token::Ident && (t.text == "forall" || t.text == "exists")) {
      Op op = t.text == "forall" ? Op::Forall : Op::Exists;
      lex.next();
      std::string var = expect_var();
      expect_sym(".");
      return make_quant(op, std::move(var), parse_formula());
    }
    return parse_implies();
  }

  Formula<A> parse_implies() {
    Formula<A> lhs = parse_or();
    if (lex.accept_sym("=>")) return make_implies(std::move(lhs),
                                                  parse_implies());
    return lhs;
  }

  Formula<A> parse_or() {
    std::vector<Formula<A>> kids{parse_and()};
    while (lex.accept_sym("|")) kids.push_back(parse_and());
    return kids.size() == 1 ? std::move(kids[0]) : make_or(std::move(kids));
  }

  Formula<A> parse_and() {
    std::vector<Formula<A>> kids{parse_unary()};
    while (lex.accept_sym("&")) kids.push_back(parse_unary());
    return kids.size() == 1 ? std::move(kids[0]) : make_and(std::move(kids));
  }

  Formula<A> parse_unary() {
    if (lex.accept_sym("!")) return make_not(parse_unary());
    if (lex.accept_sym("(")) {
      Formula<A> inner = parse_formula();
      expect_sym(")");
      return inner;
    }
    const Token& t = lex.peek();
    if (t.type == Token::Ident && t.text == "true") {
      lex.next();
      return make_true<A>();
    }
    if (t.type == Token::Ident && t.text == "false") {
      lex.next();
      return make_false<A>();
    }
    return self().parse_atom();
  }

  Formula<A> run() {
    Formula<A> f = parse_formula();
    const Token& t = lex.peek();
    if (t.type != Token::End) fail(t, "trailing input after formula");
    return f;
  }
};

/// Precedence-aware printer; parenthesization is chosen so parsing the
/// output rebuilds the identical AST (same-operator nesting gets parens,
/// flat n-ary nodes do not).
template <typename A, typename PrintAtom>
void print_rec(std::string& out, const Formula<A>& f, const PrintAtom& pa) {
  auto prec = [](const Node<A>& n) {
    switch (n.op) {
      case Op::Forall:
      case Op::Exists:
        return 0;
      case Op::Or:
        return n.kids.empty() ? 4 : 1;
      case Op::And:
        return n.kids.empty() ? 4 : 2;
      case Op::Not:
        return 3;
      case Op::Atom:
        return 4;
    }
    return 4;
  };
  auto child = [&](const Formula<A>& k, int my_prec, bool same_op) {
    bool parens = prec(*k) < my_prec || (same_op && k->op == f->op);
    if (parens) out += '(';
    print_rec(out, k, pa);
    if (parens) out += ')';
  };
  switch (f->op) {
    case Op::Atom:
      out += pa(f->atom);
      break;
    case Op::Not:
      out += '!';
      child(f->kids[0], 3, false);
      break;
    case Op::And:
    case Op::Or: {
      if (f->kids.empty()) {
        out += f->op == Op::And ? "true" : "false";
        break;
      }
      const char* sep = f->op == Op::And ? " & " : " | ";
      int my = prec(*f);
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) out += sep;
        child(f->kids[i], my, true);
      }
      break;
    }
    case Op::Forall:
    case Op::Exists:
      out += f->op == Op::Forall ? "forall " : "exists ";
      out += f->var;
      out += ". ";
      print_rec(out, f->kids[0], pa);
      break;
  }
}

}  // namespace gca::parse
