// Copyright 2026 The ftsynth Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftsynth/expr.hpp"

#include <cctype>
#include <set>

#include "ftsynth/error.hpp"

namespace ftsynth {

struct Expr::Node {
  Op op = Op::kConst;
  std::int64_t value = 0;
  std::string name;
  int slot = -1;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr ParseAll() {
    NodePtr n = ParseOr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) {
    throw Error(ErrorCode::kParse, "expression '" + std::string(text_) +
                                       "' at column " + std::to_string(pos_) +
                                       ": " + msg);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(std::string_view tok) {
    SkipSpace();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static NodePtr Make(Expr::Op op, NodePtr l, NodePtr r = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr ParseOr() {
    NodePtr l = ParseAnd();
    while (Accept("||")) l = Make(Expr::Op::kOr, l, ParseAnd());
    return l;
  }

  NodePtr ParseAnd() {
    NodePtr l = ParseCmp();
    while (Accept("&&")) l = Make(Expr::Op::kAnd, l, ParseCmp());
    return l;
  }

  NodePtr ParseCmp() {
    NodePtr l = ParseSum();
    if (Accept("==")) return Make(Expr::Op::kEq, l, ParseSum());
    if (Accept("!=")) return Make(Expr::Op::kNe, l, ParseSum());
    if (Accept("<=")) return Make(Expr::Op::kLe, l, ParseSum());
    if (Accept(">=")) return Make(Expr::Op::kGe, l, ParseSum());
    if (Accept("<")) return Make(Expr::Op::kLt, l, ParseSum());
    if (Accept(">")) return Make(Expr::Op::kGt, l, ParseSum());
    return l;
  }

  NodePtr ParseSum() {
    NodePtr l = ParseProduct();
    for (;;) {
      if (Accept("+")) {
        l = Make(Expr::Op::kAdd, l, ParseProduct());
      } else if (Accept("-")) {
        l = Make(Expr::Op::kSub, l, ParseProduct());
      } else {
        return l;
      }
    }
  }

  NodePtr ParseProduct() {
    NodePtr l = ParseUnary();
    while (Accept("*")) l = Make(Expr::Op::kMul, l, ParseUnary());
    return l;
  }

  NodePtr ParseUnary() {
    if (Accept("!")) return Make(Expr::Op::kNot, ParseUnary());
    if (Accept("-")) return Make(Expr::Op::kNeg, ParseUnary());
    return ParseAtom();
  }

  NodePtr ParseAtom() {
    SkipSpace();
    if (Accept("(")) {
      NodePtr n = ParseOr();
      if (!Accept(")")) Fail("expected ')'");
      return n;
    }
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_++] - '0');
      }
      auto n = std::make_shared<Expr::Node>();
      n->op = Expr::Op::kConst;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '.')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      auto n = std::make_shared<Expr::Node>();
      if (name == "true" || name == "false") {
        n->op = Expr::Op::kConst;
        n->value = name == "true";
      } else {
        n->op = Expr::Op::kVar;
        n->name = std::move(name);
      }
      return n;
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

NodePtr BindNode(const NodePtr& n, const std::function<int(std::string_view)>& resolver) {
  if (!n) return n;
  auto copy = std::make_shared<Expr::Node>(*n);
  if (n->op == Expr::Op::kVar) {
    copy->slot = resolver(n->name);
    if (copy->slot < 0) {
      throw Error(ErrorCode::kUndeclaredVariable, "unknown variable '" + n->name + "'");
    }
  }
  copy->lhs = BindNode(n->lhs, resolver);
  copy->rhs = BindNode(n->rhs, resolver);
  return copy;
}

std::int64_t EvalNode(const Expr::Node& n, std::span<const std::int64_t> val) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar:
      if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= val.size()) {
        throw Error(ErrorCode::kUndeclaredVariable, "unbound variable '" + n.name + "'");
      }
      return val[n.slot];
    case Op::kNeg: return -EvalNode(*n.lhs, val);
    case Op::kNot: return EvalNode(*n.lhs, val) == 0;
    case Op::kAnd: return EvalNode(*n.lhs, val) != 0 && EvalNode(*n.rhs, val) != 0;
    case Op::kOr: return EvalNode(*n.lhs, val) != 0 || EvalNode(*n.rhs, val) != 0;
    default: break;
  }
  std::int64_t a = EvalNode(*n.lhs, val);
  std::int64_t b = EvalNode(*n.rhs, val);
  switch (n.op) {
    case Op::kAdd: return a + b;
    case Op::kSub: return a - b;
    case Op::kMul: return a * b;
    case Op::kEq: return a == b;
    case Op::kNe: return a != b;
    case Op::kLt: return a < b;
    case Op::kLe: return a <= b;
    case Op::kGt: return a > b;
    case Op::kGe: return a >= b;
    default: return 0;
  }
}

void CollectReads(const Expr::Node* n, std::set<std::string>& out) {
  if (!n) return;
  if (n->op == Expr::Op::kVar) out.insert(n->name);
  CollectReads(n->lhs.get(), out);
  CollectReads(n->rhs.get(), out);
}

std::string Render(const Expr::Node& n) {
  using Op = Expr::Op;
  auto bin = [&](const char* op) {
    return "(" + Render(*n.lhs) + " " + op + " " + Render(*n.rhs) + ")";
  };
  switch (n.op) {
    case Op::kConst: return std::to_string(n.value);
    case Op::kVar: return n.name;
    case Op::kNeg: return "-" + Render(*n.lhs);
    case Op::kNot: return "!" + Render(*n.lhs);
    case Op::kAdd: return bin("+");
    case Op::kSub: return bin("-");
    case Op::kMul: return bin("*");
    case Op::kEq: return bin("==");
    case Op::kNe: return bin("!=");
    case Op::kLt: return bin("<");
    case Op::kLe: return bin("<=");
    case Op::kGt: return bin(">");
    case Op::kGe: return bin(">=");
    case Op::kAnd: return bin("&&");
    case Op::kOr: return bin("||");
  }
  return "?";
}

}  // namespace

Expr::Expr() : Expr(Constant(1)) {}

Expr Expr::Constant(std::int64_t v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::Variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::Parse(std::string_view text) {
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) return Expr();
  return Expr(Parser(text).ParseAll());
}

Expr Expr::Bind(const std::function<int(std::string_view)>& resolver) const {
  return Expr(BindNode(root_, resolver));
}

std::int64_t Expr::Eval(std::span<const std::int64_t> valuation) const {
  return EvalNode(*root_, valuation);
}

bool Expr::IsTrivialTrue() const {
  return root_->op == Op::kConst && root_->value != 0;
}

std::vector<std::string> Expr::Reads() const {
  std::set<std::string> names;
  CollectReads(root_.get(), names);
  return {names.begin(), names.end()};
}

std::string Expr::ToString() const {
  std::string s = Render(*root_);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    // drop the redundant outermost parentheses of a binary node
    int depth = 0;
    bool outer = true;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
      if (depth == 0) {
        outer = false;
        break;
      }
    }
    if (outer) s = s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace ftsynth
