#include "memsest/parser.hpp"

#include <map>
#include <set>

#include "memsest/error.hpp"
#include "memsest/lexer.hpp"

namespace memsest {

namespace {

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Ast unit(std::vector<std::string> includes) {
    Ast ast;
    ast.includes = std::move(includes);
    while (!at_end())
      ast.functions.push_back(function());
    return ast;
  }

  ExprPtr standalone_expr() {
    auto e = expr();
    if (!at_end())
      error(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  std::uint32_t last_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  bool is(std::string_view punct) const {
    return peek().kind == Tok::Punct && peek().text == punct;
  }
  bool is_kw(std::string_view kw) const {
    return peek().kind == Tok::Keyword && peek().text == kw;
  }
  bool accept(std::string_view punct) {
    if (!is(punct))
      return false;
    advance();
    return true;
  }

  [[noreturn]] void error(const Token& t, std::string msg, Errc kind = Errc::SyntaxError) const {
    throw ParseError({Diagnostic{kind, t.line, t.column, std::move(msg)}});
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) {
      const Token& t = peek();
      error(t, "expected '" + std::string(punct) + "' but found " +
                   (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
    }
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) {
      if (peek().kind == Tok::Keyword)
        unsupported_keyword();
      error(peek(), "expected identifier");
    }
    return advance().text;
  }

  [[noreturn]] void unsupported_keyword() const {
    const Token& t = peek();
    error(t, "'" + t.text + "' is outside the supported C subset", Errc::UnsupportedConstruct);
  }

  void reject_unsupported_punct() const {
    static const std::map<std::string, std::string> why = {
        {"&", "address-of and bitwise operators are not supported"},
        {"|", "bitwise operators are not supported"},
        {"^", "bitwise operators are not supported"},
        {"~", "bitwise operators are not supported"},
        {"<<", "shift operators are not supported"},
        {">>", "shift operators are not supported"},
        {"<<=", "shift operators are not supported"},
        {">>=", "shift operators are not supported"},
        {"&=", "bitwise operators are not supported"},
        {"|=", "bitwise operators are not supported"},
        {"^=", "bitwise operators are not supported"},
        {"?", "the conditional operator is not supported"},
        {"->", "structs and pointers are not supported"},
        {".", "structs are not supported"},
        {"::", "C++ syntax is not supported"},
    };
    if (peek().kind != Tok::Punct)
      return;
    auto it = why.find(peek().text);
    if (it != why.end())
      error(peek(), it->second, Errc::UnsupportedConstruct);
  }

  FunctionDef function() {
    FunctionDef f;
    const Token& start = peek();
    if (is_kw("int"))
      f.ret = ReturnType::Int;
    else if (is_kw("void"))
      f.ret = ReturnType::Void;
    else if (peek().kind == Tok::Keyword)
      unsupported_keyword();
    else
      error(peek(), "expected function definition");
    advance();
    if (is("*"))
      error(peek(), "pointers are not supported", Errc::UnsupportedConstruct);
    f.name = ident();
    if (!is("("))
      error(peek(), "global variables are not supported", Errc::UnsupportedConstruct);
    expect("(");
    if (is_kw("void") && peek(1).kind == Tok::Punct && peek(1).text == ")") {
      advance();
    } else if (!is(")")) {
      do {
        f.params.push_back(param());
      } while (accept(","));
    }
    expect(")");
    if (is(";"))
      error(peek(), "function prototypes are not supported", Errc::UnsupportedConstruct);
    f.body = block();
    f.span = {start.span.begin, last_end()};
    return f;
  }

  Param param() {
    Param p;
    if (!is_kw("int")) {
      if (peek().kind == Tok::Keyword)
        unsupported_keyword();
      error(peek(), "expected 'int' parameter");
    }
    advance();
    if (is("*"))
      error(peek(), "pointers are not supported", Errc::UnsupportedConstruct);
    p.name = ident();
    if (accept("[")) {
      p.is_array = true;
      if (!is("]"))
        p.size = expr();
      expect("]");
      if (is("["))
        error(peek(), "multi-dimensional arrays are not supported", Errc::UnsupportedConstruct);
    }
    return p;
  }

  StmtPtr block() {
    const Token& open = peek();
    expect("{");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Block;
    while (!is("}")) {
      if (at_end())
        error(peek(), "expected '}' before end of input");
      s->body.push_back(stmt());
    }
    advance();
    s->span = {open.span.begin, last_end()};
    return s;
  }

  // Loop and branch bodies are always blocks in the tree.
  StmtPtr body_block() {
    if (is("{"))
      return block();
    const Token& start = peek();
    auto inner = stmt();
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Block;
    s->body.push_back(std::move(inner));
    s->span = {start.span.begin, last_end()};
    return s;
  }

  StmtPtr stmt() {
    const Token& start = peek();
    if (peek().kind == Tok::Keyword) {
      const std::string& kw = peek().text;
      if (kw == "int") {
        auto s = decl();
        expect(";");
        return finish(s, start);
      }
      if (kw == "if")
        return if_stmt();
      if (kw == "for")
        return for_stmt();
      if (kw == "while") {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::While;
        expect("(");
        s->cond = expr();
        expect(")");
        s->then_branch = body_block();
        return finish(s, start);
      }
      if (kw == "return") {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = Stmt::Kind::Return;
        if (!is(";"))
          s->value = expr();
        expect(";");
        return finish(s, start);
      }
      if (kw == "else")
        error(peek(), "'else' without matching 'if'");
      unsupported_keyword();
    }
    if (is("{"))
      return block();
    if (is(";")) {
      advance();
      auto s = std::make_shared<Stmt>();
      s->kind = Stmt::Kind::Block;
      return finish(s, start);
    }
    auto s = simple();
    expect(";");
    return finish(s, start);
  }

  std::shared_ptr<Stmt> finish(std::shared_ptr<Stmt> s, const Token& start) {
    s->span = {start.span.begin, last_end()};
    return s;
  }

  std::shared_ptr<Stmt> decl() {
    advance(); // int
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Decl;
    do {
      Declarator d;
      if (is("*"))
        error(peek(), "pointers are not supported", Errc::UnsupportedConstruct);
      d.name = ident();
      if (is("("))
        error(peek(), "nested function declarations are not supported", Errc::UnsupportedConstruct);
      if (accept("[")) {
        d.is_array = true;
        if (!is("]"))
          d.size = expr();
        expect("]");
        if (is("["))
          error(peek(), "multi-dimensional arrays are not supported", Errc::UnsupportedConstruct);
      }
      if (accept("=")) {
        if (accept("{")) {
          d.has_init_list = true;
          if (!is("}")) {
            do {
              if (is("}"))
                break;
              d.init_list.push_back(expr());
            } while (accept(","));
          }
          expect("}");
        } else {
          d.init = expr();
        }
      }
      s->decls.push_back(std::move(d));
    } while (accept(","));
    return s;
  }

  StmtPtr if_stmt() {
    const Token& start = peek();
    advance();
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::If;
    expect("(");
    s->cond = expr();
    expect(")");
    s->then_branch = body_block();
    if (is_kw("else")) {
      advance();
      s->else_branch = body_block();
    }
    return finish(s, start);
  }

  StmtPtr for_stmt() {
    const Token& start = peek();
    advance();
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::For;
    expect("(");
    if (!is(";")) {
      const Token& init_start = peek();
      if (is_kw("int"))
        s->init = finish(decl(), init_start);
      else
        s->init = finish(simple(), init_start);
      if (s->init->kind == Stmt::Kind::ExprStmt)
        error(init_start, "for-loop initializer must be a declaration or assignment",
              Errc::UnsupportedConstruct);
    }
    expect(";");
    if (!is(";"))
      s->cond = expr();
    expect(";");
    if (!is(")")) {
      const Token& step_start = peek();
      s->step = finish(simple(), step_start);
      if (s->step->kind == Stmt::Kind::ExprStmt)
        error(step_start, "for-loop step must be an assignment", Errc::UnsupportedConstruct);
    }
    if (is(","))
      error(peek(), "the comma operator is not supported", Errc::UnsupportedConstruct);
    expect(")");
    s->then_branch = body_block();
    return finish(s, start);
  }

  static bool is_lvalue(const Expr& e) {
    return e.kind == Expr::Kind::Var || e.kind == Expr::Kind::Index;
  }

  // Assignment, compound assignment, ++/-- or expression statement (no trailing ';').
  std::shared_ptr<Stmt> simple() {
    auto s = std::make_shared<Stmt>();
    if (is("++") || is("--")) {
      bool inc = advance().text == "++";
      const Token& t = peek();
      auto target = unary();
      if (!is_lvalue(*target))
        error(t, "operand of increment must be a variable or array element");
      s->kind = Stmt::Kind::CompoundAssign;
      s->aop = inc ? AssignOp::Inc : AssignOp::Dec;
      s->target = std::move(target);
      return s;
    }
    const Token& t = peek();
    auto e = expr();
    static const std::map<std::string, AssignOp> compound = {
        {"+=", AssignOp::Add}, {"-=", AssignOp::Sub}, {"*=", AssignOp::Mul},
        {"/=", AssignOp::Div}, {"%=", AssignOp::Mod}};
    if (is("=") || is("++") || is("--") || (peek().kind == Tok::Punct && compound.count(peek().text))) {
      if (!is_lvalue(*e))
        error(t, "left side of assignment must be a variable or array element");
      std::string op = advance().text;
      s->target = std::move(e);
      if (op == "=") {
        s->kind = Stmt::Kind::Assign;
        s->value = expr();
      } else if (op == "++" || op == "--") {
        s->kind = Stmt::Kind::CompoundAssign;
        s->aop = op == "++" ? AssignOp::Inc : AssignOp::Dec;
      } else {
        s->kind = Stmt::Kind::CompoundAssign;
        s->aop = compound.at(op);
        s->value = expr();
      }
      if (is("=") || (peek().kind == Tok::Punct && compound.count(peek().text)))
        error(peek(), "chained assignment is not supported", Errc::UnsupportedConstruct);
      return s;
    }
    s->kind = Stmt::Kind::ExprStmt;
    s->value = std::move(e);
    return s;
  }

  // Expressions, lowest precedence first.
  ExprPtr expr() {
    auto e = logical_or();
    reject_unsupported_punct();
    return e;
  }

  template <typename Next>
  ExprPtr binary_level(std::initializer_list<std::pair<std::string_view, BinOp>> ops, Next next) {
    auto lhs = (this->*next)();
    for (;;) {
      reject_unsupported_punct();
      bool found = false;
      for (auto [text, op] : ops) {
        if (is(text)) {
          advance();
          auto rhs = (this->*next)();
          Span sp{lhs->span.begin, rhs->span.end};
          lhs = make_binary(op, std::move(lhs), std::move(rhs), sp);
          found = true;
          break;
        }
      }
      if (!found)
        return lhs;
    }
  }

  ExprPtr logical_or() { return binary_level({{"||", BinOp::Or}}, &Parser::logical_and); }
  ExprPtr logical_and() { return binary_level({{"&&", BinOp::And}}, &Parser::equality); }
  ExprPtr equality() {
    return binary_level({{"==", BinOp::Eq}, {"!=", BinOp::Ne}}, &Parser::relational);
  }
  ExprPtr relational() {
    return binary_level({{"<=", BinOp::Le}, {">=", BinOp::Ge}, {"<", BinOp::Lt}, {">", BinOp::Gt}},
                        &Parser::additive);
  }
  ExprPtr additive() {
    return binary_level({{"+", BinOp::Add}, {"-", BinOp::Sub}}, &Parser::multiplicative);
  }
  ExprPtr multiplicative() {
    return binary_level({{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod}}, &Parser::unary);
  }

  ExprPtr unary() {
    const Token& t = peek();
    if (is("-") || is("!")) {
      UnOp op = advance().text == "-" ? UnOp::Neg : UnOp::Not;
      auto operand = unary();
      return make_unary(op, std::move(operand), {t.span.begin, last_end()});
    }
    if (is("+")) {
      advance();
      return unary();
    }
    if (is("*"))
      error(t, "pointer dereference is not supported", Errc::UnsupportedConstruct);
    if (is("&"))
      error(t, "address-of is not supported", Errc::UnsupportedConstruct);
    if (is("++") || is("--"))
      error(t, "increment inside an expression is not supported", Errc::UnsupportedConstruct);
    reject_unsupported_punct();
    return postfix();
  }

  ExprPtr postfix() {
    auto e = primary();
    if (is("[")) {
      if (e->kind != Expr::Kind::Var)
        error(peek(), "only named arrays can be subscripted", Errc::UnsupportedConstruct);
      advance();
      auto index = expr();
      expect("]");
      e = make_index(e->name, std::move(index), {e->span.begin, last_end()});
      if (is("["))
        error(peek(), "multi-dimensional arrays are not supported", Errc::UnsupportedConstruct);
    }
    if (is("(") )
      error(peek(), "only named functions can be called", Errc::UnsupportedConstruct);
    if (is("++") || is("--")) {
      // Statement-level x++ is handled by simple(); anything else is an expression side effect.
      const Token& next = peek(1);
      bool statement_end = next.kind == Tok::Punct && (next.text == ";" || next.text == ")");
      if (!statement_end)
        error(peek(), "increment inside an expression is not supported", Errc::UnsupportedConstruct);
    }
    reject_unsupported_punct();
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        advance();
        return make_int(t.value, t.span);
      case Tok::String:
        advance();
        return make_str(t.text, t.span);
      case Tok::Ident: {
        advance();
        std::string name = t.text;
        if (accept("(")) {
          std::vector<ExprPtr> args;
          if (!is(")")) {
            do {
              args.push_back(expr());
            } while (accept(","));
          }
          expect(")");
          return make_call(std::move(name), std::move(args), {t.span.begin, last_end()});
        }
        return make_var(std::move(name), t.span);
      }
      case Tok::Keyword:
        unsupported_keyword();
      case Tok::Punct:
        if (t.text == "(") {
          if (peek(1).kind == Tok::Keyword)
            error(t, "casts are not supported", Errc::UnsupportedConstruct);
          advance();
          auto e = expr();
          expect(")");
          return e;
        }
        reject_unsupported_punct();
        error(t, "unexpected '" + t.text + "'");
      case Tok::End:
        error(t, "unexpected end of input");
    }
    error(t, "unexpected token");
  }
};

// Name resolution over a parsed unit; collects every problem it finds.
class Resolver {
public:
  Resolver(const Ast& ast, std::string_view source) : ast_(ast), source_(source) {}

  std::vector<Diagnostic> run() {
    for (const auto& f : ast_.functions) {
      if (is_extern_function(f.name))
        report(f.span, "function '" + f.name + "' shadows a library function");
      else if (!functions_.emplace(f.name, &f).second)
        report(f.span, "redefinition of function '" + f.name + "'");
    }
    for (const auto& f : ast_.functions)
      function(f);
    return std::move(diags_);
  }

private:
  enum class VarKind { Scalar, Array };

  const Ast& ast_;
  std::string_view source_;
  std::map<std::string, const FunctionDef*> functions_;
  std::vector<std::map<std::string, VarKind>> scopes_;
  const FunctionDef* current_ = nullptr;
  std::vector<Diagnostic> diags_;

  void report(Span at, std::string msg, Errc kind = Errc::UnresolvedName) {
    std::uint32_t line = 1, col = 1;
    for (std::size_t i = 0; i < at.begin && i < source_.size(); ++i) {
      if (source_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    diags_.push_back(Diagnostic{kind, line, col, std::move(msg)});
  }

  const VarKind* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return &f->second;
    }
    return nullptr;
  }

  void declare(const std::string& name, VarKind kind, Span at) {
    if (!scopes_.back().emplace(name, kind).second)
      report(at, "redeclaration of '" + name + "'", Errc::SyntaxError);
  }

  void function(const FunctionDef& f) {
    current_ = &f;
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : f.params) {
      if (p.size)
        scalar_expr(*p.size);
      declare(p.name, p.is_array ? VarKind::Array : VarKind::Scalar, f.span);
    }
    // The body block shares the parameter scope, as in C.
    for (const auto& s : f.body->body)
      stmt(*s);
    scopes_.clear();
  }

  void block(const Stmt& b) {
    scopes_.emplace_back();
    for (const auto& s : b.body)
      stmt(*s);
    scopes_.pop_back();
  }

  void lvalue(const Expr& target) {
    const VarKind* kind = lookup(target.name);
    if (!kind) {
      report(target.span, "use of undeclared identifier '" + target.name + "'");
      return;
    }
    if (target.kind == Expr::Kind::Var && *kind == VarKind::Array)
      report(target.span, "cannot assign to array '" + target.name + "'", Errc::UnsupportedConstruct);
    if (target.kind == Expr::Kind::Index) {
      if (*kind != VarKind::Array)
        report(target.span, "subscripted value '" + target.name + "' is not an array");
      scalar_expr(target.index());
    }
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        for (const auto& d : s.decls) {
          if (d.size)
            scalar_expr(*d.size);
          if (d.init)
            scalar_expr(*d.init);
          for (const auto& e : d.init_list)
            scalar_expr(*e);
          if (d.is_array && !d.size && !d.has_init_list)
            report(s.span, "array '" + d.name + "' needs a size or an initializer list",
                   Errc::SyntaxError);
          if (!d.is_array && d.has_init_list)
            report(s.span, "scalar '" + d.name + "' cannot take an initializer list",
                   Errc::SyntaxError);
          if (d.is_array && d.init)
            report(s.span, "array '" + d.name + "' needs a braced initializer", Errc::SyntaxError);
          declare(d.name, d.is_array ? VarKind::Array : VarKind::Scalar, s.span);
        }
        break;
      case Stmt::Kind::Assign:
      case Stmt::Kind::CompoundAssign:
        lvalue(*s.target);
        if (s.value)
          scalar_expr(*s.value);
        break;
      case Stmt::Kind::ExprStmt:
        if (s.value->kind == Expr::Kind::Call)
          call(*s.value, /*value_used=*/false);
        else
          scalar_expr(*s.value);
        break;
      case Stmt::Kind::If:
        scalar_expr(*s.cond);
        block(*s.then_branch);
        if (s.else_branch)
          block(*s.else_branch);
        break;
      case Stmt::Kind::While:
        scalar_expr(*s.cond);
        block(*s.then_branch);
        break;
      case Stmt::Kind::For:
        scopes_.emplace_back();
        if (s.init)
          stmt(*s.init);
        if (s.cond)
          scalar_expr(*s.cond);
        if (s.step)
          stmt(*s.step);
        block(*s.then_branch);
        scopes_.pop_back();
        break;
      case Stmt::Kind::Return:
        if (current_->ret == ReturnType::Void && s.value)
          report(s.span, "void function '" + current_->name + "' cannot return a value",
                 Errc::SyntaxError);
        if (current_->ret == ReturnType::Int && !s.value)
          report(s.span, "function '" + current_->name + "' must return a value",
                 Errc::SyntaxError);
        if (s.value)
          scalar_expr(*s.value);
        break;
      case Stmt::Kind::Block:
        block(s);
        break;
    }
  }

  void call(const Expr& e, bool value_used) {
    if (is_extern_function(e.name)) {
      for (const auto& a : e.args) {
        if (a->kind == Expr::Kind::StrLit)
          continue;
        scalar_expr(*a);
      }
      return;
    }
    auto it = functions_.find(e.name);
    if (it == functions_.end()) {
      report(e.span, "call to undeclared function '" + e.name + "'");
      return;
    }
    const FunctionDef& f = *it->second;
    if (f.name == "main")
      report(e.span, "calling main is not supported", Errc::UnsupportedConstruct);
    if (value_used && f.ret == ReturnType::Void)
      report(e.span, "void function '" + f.name + "' used as a value", Errc::SyntaxError);
    if (e.args.size() != f.params.size()) {
      report(e.span, "function '" + f.name + "' expects " + std::to_string(f.params.size()) +
                         " argument(s), got " + std::to_string(e.args.size()),
             Errc::SyntaxError);
      return;
    }
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const Expr& a = *e.args[i];
      if (f.params[i].is_array) {
        const VarKind* kind = a.kind == Expr::Kind::Var ? lookup(a.name) : nullptr;
        if (a.kind == Expr::Kind::Var && !kind)
          report(a.span, "use of undeclared identifier '" + a.name + "'");
        else if (!kind || *kind != VarKind::Array)
          report(a.span, "argument " + std::to_string(i + 1) + " of '" + f.name +
                             "' must be an array variable",
                 Errc::SyntaxError);
      } else {
        scalar_expr(a);
      }
    }
  }

  void scalar_expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        break;
      case Expr::Kind::StrLit:
        report(e.span, "string literals are only allowed as printf-family arguments",
               Errc::UnsupportedConstruct);
        break;
      case Expr::Kind::Var: {
        const VarKind* kind = lookup(e.name);
        if (!kind)
          report(e.span, "use of undeclared identifier '" + e.name + "'");
        else if (*kind == VarKind::Array)
          report(e.span, "array '" + e.name + "' used as a scalar value", Errc::UnsupportedConstruct);
        break;
      }
      case Expr::Kind::Index: {
        const VarKind* kind = lookup(e.name);
        if (!kind)
          report(e.span, "use of undeclared identifier '" + e.name + "'");
        else if (*kind != VarKind::Array)
          report(e.span, "subscripted value '" + e.name + "' is not an array");
        scalar_expr(e.index());
        break;
      }
      case Expr::Kind::Binary:
      case Expr::Kind::Unary:
        for (const auto& a : e.args)
          scalar_expr(*a);
        break;
      case Expr::Kind::Call:
        call(e, /*value_used=*/true);
        break;
    }
  }
};

} // namespace

Ast parse(std::string_view source) {
  LexResult lexed = lex(source);
  Parser p(std::move(lexed.tokens));
  Ast ast = p.unit(std::move(lexed.includes));
  auto diags = Resolver(ast, source).run();
  if (!diags.empty())
    throw ParseError(std::move(diags));
  return ast;
}

ExprPtr parse_expression(std::string_view text) {
  LexResult lexed = lex(text);
  Parser p(std::move(lexed.tokens));
  return p.standalone_expr();
}

} // namespace memsest
