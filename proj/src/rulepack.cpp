// Copyright 2026 The pdgen Authors
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

#include "pdgen/rulepack.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "embedded_data.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen::arith {

struct Expr::Node {
  enum class Kind { kNumber, kSlot, kNeg, kAdd, kSub, kMul, kDiv, kPow };
  Kind kind = Kind::kNumber;
  Rational number;
  std::string slot;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

// Largest slip magnitude tried when replaying foreign steps.
constexpr int kMaxReplaySlip = 8;

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw RulePackError("expression '" + std::string(text_) + "': " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (eat('+')) {
        n = binary(Node::Kind::kAdd, n, term());
      } else if (eat('-')) {
        n = binary(Node::Kind::kSub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (eat('*')) {
        n = binary(Node::Kind::kMul, n, unary());
      } else if (eat('/')) {
        n = binary(Node::Kind::kDiv, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::kNeg;
      n->lhs = unary();
      return n;
    }
    NodePtr base = atom();
    if (eat('^')) return binary(Node::Kind::kPow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (pos_ >= text_.size()) fail("unexpected end");
    auto n = std::make_shared<Node>();
    if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      size_t begin = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      n->kind = Node::Kind::kNumber;
      n->number = Rational(std::stoll(std::string(text_.substr(begin, pos_ - begin))));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      size_t begin = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      n->kind = Node::Kind::kSlot;
      n->slot = std::string(text_.substr(begin, pos_ - begin));
      return n;
    }
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  size_t pos_ = 0;
};

Rational eval_node(const Node& n, const State& state) {
  switch (n.kind) {
    case Node::Kind::kNumber: return n.number;
    case Node::Kind::kSlot: return state.slot(n.slot);
    case Node::Kind::kNeg: return -eval_node(*n.lhs, state);
    case Node::Kind::kAdd: return eval_node(*n.lhs, state) + eval_node(*n.rhs, state);
    case Node::Kind::kSub: return eval_node(*n.lhs, state) - eval_node(*n.rhs, state);
    case Node::Kind::kMul: return eval_node(*n.lhs, state) * eval_node(*n.rhs, state);
    case Node::Kind::kDiv: return eval_node(*n.lhs, state) / eval_node(*n.rhs, state);
    case Node::Kind::kPow: return eval_node(*n.lhs, state).pow(eval_node(*n.rhs, state));
  }
  throw std::logic_error("bad expression node");
}

std::string flip_relation(const std::string& rel) {
  if (rel == "<") return ">";
  if (rel == ">") return "<";
  if (rel == "<=") return ">=";
  if (rel == ">=") return "<=";
  return rel;
}

// Replaces every {expr} with its value on `state`.
std::string render_template(const std::string& tpl, const State& state) {
  std::string out;
  size_t pos = 0;
  while (pos < tpl.size()) {
    size_t open = tpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    size_t close = tpl.find('}', open);
    if (close == std::string::npos) throw RulePackError("unterminated placeholder in '" + tpl + "'");
    out.append(tpl, pos, open - pos);
    out += Expr::parse(std::string_view(tpl).substr(open + 1, close - open - 1)).eval(state).str();
    pos = close + 1;
  }
  return out;
}

void check_template(const std::string& tpl) {
  size_t pos = 0;
  while ((pos = tpl.find('{', pos)) != std::string::npos) {
    size_t close = tpl.find('}', pos);
    if (close == std::string::npos) throw RulePackError("unterminated placeholder in '" + tpl + "'");
    Expr::parse(std::string_view(tpl).substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
}

std::vector<Stage> parse_stages(const Json& j, const std::string& rule_id) {
  std::vector<Stage> out;
  auto add = [&](const std::string& name) {
    auto stage = stage_from_name(name);
    if (!stage) throw RulePackError("rule '" + rule_id + "': unknown stage '" + name + "'");
    out.push_back(*stage);
  };
  if (j.is_string()) {
    add(j.get<std::string>());
  } else {
    for (const auto& s : j) add(s.get<std::string>());
  }
  return out;
}

Rule parse_rule(const Json& j, bool buggy) {
  Rule r;
  r.id = j.at("id").get<std::string>();
  r.buggy = buggy;
  std::string kind = j.value("kind", std::string("rewrite"));
  if (kind == "rewrite") {
    r.kind = RuleKind::kRewrite;
  } else if (kind == "stop") {
    r.kind = RuleKind::kStop;
  } else {
    throw RulePackError("rule '" + r.id + "': unknown kind '" + kind + "'");
  }
  r.concept_label = j.value("concept", std::string());
  r.from = parse_stages(j.at("from"), r.id);
  if (j.contains("to")) {
    auto stage = stage_from_name(j["to"].get<std::string>());
    if (!stage) throw RulePackError("rule '" + r.id + "': unknown stage in 'to'");
    r.to = *stage;
  }
  if (j.contains("rel_in")) r.rel_in = j["rel_in"].get<std::vector<std::string>>();
  if (j.contains("when")) {
    for (const auto& g : j["when"]) r.when.push_back(Guard::parse(g.get<std::string>()));
  }
  if (j.contains("set")) {
    for (const auto& [slot, expr] : j["set"].items()) r.set.emplace_back(slot, Expr::parse(expr.get<std::string>()));
  }
  r.flip = j.value("flip", false);
  r.text = j.value("text", std::string());
  r.show = j.value("show", std::string());
  r.misconception = j.value("misconception", std::string());
  check_template(r.text);
  check_template(r.show);
  return r;
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.root_ = ExprParser(text).parse();
  e.source_ = std::string(text);
  return e;
}

Rational Expr::eval(const State& state) const { return eval_node(*root_, state); }

Guard Guard::parse(std::string_view text) {
  static constexpr std::string_view kOps[] = {"==", "!=", "<=", ">=", "<", ">"};
  for (std::string_view op : kOps) {
    size_t pos = text.find(op);
    if (pos == std::string_view::npos) continue;
    return Guard{Expr::parse(text.substr(0, pos)), std::string(op), Expr::parse(text.substr(pos + op.size()))};
  }
  throw RulePackError("guard '" + std::string(text) + "' has no comparison");
}

bool Guard::holds(const State& state) const {
  Rational l = lhs.eval(state);
  Rational r = rhs.eval(state);
  if (op == "==") return l == r;
  if (op == "!=") return l != r;
  if (op == "<=") return l <= r;
  if (op == ">=") return l >= r;
  if (op == "<") return l < r;
  return l > r;
}

std::string slip_rule_id(int delta) {
  return std::string(kSlipPrefix) + (delta > 0 ? "+" : "") + std::to_string(delta);
}

std::optional<int> parse_slip_rule_id(std::string_view id) {
  if (id.substr(0, kSlipPrefix.size()) != kSlipPrefix) return std::nullopt;
  std::string rest(id.substr(kSlipPrefix.size()));
  if (rest.empty()) return std::nullopt;
  try {
    size_t used = 0;
    int delta = std::stoi(rest, &used);
    if (used != rest.size() || delta == 0) return std::nullopt;
    return delta;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

RulePack RulePack::from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw RulePackError(std::string("rule pack is not valid JSON: ") + e.what());
  }
  RulePack pack;
  try {
    pack.name_ = j.value("name", std::string("unnamed"));
    for (const auto& r : j.at("correct_rules")) pack.correct_.push_back(parse_rule(r, false));
    for (const auto& r : j.at("buggy_rules")) pack.buggy_.push_back(parse_rule(r, true));
  } catch (const Json::exception& e) {
    throw RulePackError(std::string("malformed rule pack: ") + e.what());
  }
  pack.validate();
  return pack;
}

RulePack RulePack::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RulePackError("cannot open rule pack '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

const RulePack& RulePack::builtin() {
  static const RulePack pack = from_json_text(std::string(embedded::rulepack_json()));
  return pack;
}

void RulePack::validate() const {
  if (correct_.empty()) throw RulePackError("rule pack has no correct rules");
  std::set<std::string> ids;
  auto check_common = [&](const Rule& r) {
    if (r.id.empty()) throw RulePackError("rule with empty id");
    if (parse_slip_rule_id(r.id) || r.id.rfind(kSlipPrefix, 0) == 0) {
      throw RulePackError("rule id '" + r.id + "' uses the reserved slip prefix");
    }
    if (!ids.insert(r.id).second) throw RulePackError("duplicate rule id '" + r.id + "'");
    if (r.from.empty()) throw RulePackError("rule '" + r.id + "' has no source stage");
    if (r.kind == RuleKind::kRewrite && r.text.empty()) throw RulePackError("rule '" + r.id + "' has no text");
  };
  for (const auto& r : correct_) {
    check_common(r);
    if (r.kind == RuleKind::kStop) throw RulePackError("correct rule '" + r.id + "' cannot be a stop rule");
  }
  for (const auto& r : buggy_) {
    check_common(r);
    if (r.misconception.empty()) throw RulePackError("buggy rule '" + r.id + "' has no misconception sentence");
  }

  // Every buggy rule must fire on some state the generator can reach.
  std::set<std::string> unmatched;
  for (const auto& r : buggy_) unmatched.insert(r.id);
  for_each_generator_state([&](const State& initial) {
    State state = initial;
    for (int step = 0; step < 32 && !unmatched.empty(); ++step) {
      for (const auto& r : buggy_) {
        if (!unmatched.count(r.id)) continue;
        if (r.kind == RuleKind::kStop && step == 0) continue;
        if (fires(r, state)) unmatched.erase(r.id);
      }
      if (is_final(state)) break;
      auto next = correct_step(state);
      if (!next) break;
      state = next->next;
    }
    return !unmatched.empty();
  });
  if (!unmatched.empty()) {
    throw RulePackError("buggy rule '" + *unmatched.begin() + "' never fires on a generator state");
  }
}

const Rule* RulePack::find(std::string_view id) const {
  for (const auto* list : {&correct_, &buggy_}) {
    for (const auto& r : *list) {
      if (r.id == id) return &r;
    }
  }
  return nullptr;
}

const Rule* RulePack::find_by_misconception(std::string_view text) const {
  std::string wanted = trim(text);
  for (const auto& r : buggy_) {
    if (r.misconception == wanted) return &r;
  }
  return nullptr;
}

bool RulePack::fires(const Rule& rule, const State& state) const {
  if (std::find(rule.from.begin(), rule.from.end(), state.stage) == rule.from.end()) return false;
  if (!rule.rel_in.empty() && std::find(rule.rel_in.begin(), rule.rel_in.end(), state.rel) == rule.rel_in.end()) {
    return false;
  }
  try {
    for (const auto& g : rule.when) {
      if (!g.holds(state)) return false;
    }
    // A rule whose rewrite cannot be evaluated here does not fire.
    for (const auto& [slot, expr] : rule.set) expr.eval(state);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Application RulePack::apply(const Rule& rule, const State& state) const {
  if (rule.kind == RuleKind::kStop) throw std::logic_error("stop rule '" + rule.id + "' has no step");
  State next = state;
  for (const auto& [slot, expr] : rule.set) next.slots[slot] = expr.eval(state);
  if (rule.flip) next.rel = flip_relation(state.rel);
  if (rule.to) next.stage = *rule.to;
  if (!rule.show.empty()) next.expr = render_template(rule.show, state);

  Application app;
  app.rule_id = rule.id;
  app.erroneous = rule.buggy;
  app.step.text = render_template(rule.text, state);
  app.step.intermediate_result = render_state(next);
  app.step.is_erroneous = rule.buggy;
  app.step.rule_id = rule.id;
  app.next = std::move(next);
  return app;
}

std::optional<Application> RulePack::correct_step(const State& state) const {
  for (const auto& r : correct_) {
    if (fires(r, state)) return apply(r, state);
  }
  return std::nullopt;
}

std::vector<Application> RulePack::buggy_steps(const State& state) const {
  std::vector<Application> out;
  for (const auto& r : buggy_) {
    if (r.kind == RuleKind::kRewrite && fires(r, state)) out.push_back(apply(r, state));
  }
  return out;
}

std::optional<Application> RulePack::slip_step(const State& state, int delta) const {
  auto correct = correct_step(state);
  if (!correct) return std::nullopt;
  std::string slot = value_slot(correct->next.stage);
  if (slot.empty() || delta == 0) return std::nullopt;
  Application app = std::move(*correct);
  try {
    app.next.slots[slot] = app.next.slot(slot) + Rational(delta);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  app.rule_id = slip_rule_id(delta);
  app.erroneous = true;
  app.slip = true;
  app.step.intermediate_result = render_state(app.next);
  app.step.is_erroneous = true;
  app.step.rule_id = app.rule_id;
  return app;
}

std::optional<Application> RulePack::apply_id(std::string_view rule_id, const State& state) const {
  if (auto delta = parse_slip_rule_id(rule_id)) return slip_step(state, *delta);
  const Rule* rule = find(rule_id);
  if (!rule || rule->kind == RuleKind::kStop || !fires(*rule, state)) return std::nullopt;
  return apply(*rule, state);
}

std::optional<State> RulePack::replay(const State& start, const std::vector<ReasoningStep>& steps) const {
  State state = start;
  auto same = [](const ReasoningStep& a, const ReasoningStep& b) {
    return a.text == b.text && a.intermediate_result == b.intermediate_result;
  };
  for (const auto& step : steps) {
    std::optional<Application> match;
    if (step.rule_id) {
      auto app = apply_id(*step.rule_id, state);
      if (app && same(app->step, step)) match = std::move(app);
    }
    if (!match) {
      std::vector<Application> candidates;
      if (auto c = correct_step(state)) candidates.push_back(std::move(*c));
      for (auto& b : buggy_steps(state)) candidates.push_back(std::move(b));
      for (int k = 1; k <= kMaxReplaySlip; ++k) {
        for (int delta : {k, -k}) {
          if (auto s = slip_step(state, delta)) candidates.push_back(std::move(*s));
        }
      }
      for (auto& c : candidates) {
        if (same(c.step, step)) {
          match = std::move(c);
          break;
        }
      }
    }
    if (!match) return std::nullopt;
    state = std::move(match->next);
  }
  return state;
}

std::vector<std::string> RulePack::concepts_for(const State& initial, int cap) const {
  Solution sol = solve(*this, initial, {}, cap);
  std::set<std::string> concepts;
  for (const auto& app : sol.steps) {
    const Rule* r = find(app.rule_id);
    if (r && !r->concept_label.empty()) concepts.insert(r->concept_label);
  }
  return {concepts.begin(), concepts.end()};
}

std::string Solution::answer() const {
  if (diverged) return {};
  return render_answer(final_state);
}

ReasoningTrajectory Solution::trajectory() const {
  ReasoningTrajectory t;
  for (const auto& app : steps) t.steps.push_back(app.step);
  t.final_answer = answer();
  t.source = stopped ? TrajectorySource::kTerminalStop : TrajectorySource::kSimulation;
  return t;
}

Solution solve(const RulePack& pack, const State& initial, const std::vector<const Rule*>& student_rules, int cap) {
  auto has = [&](const Rule& r) {
    return std::find(student_rules.begin(), student_rules.end(), &r) != student_rules.end();
  };
  Solution sol;
  State state = initial;
  while (true) {
    if (!sol.steps.empty()) {
      for (const auto& r : pack.buggy_rules()) {
        if (r.kind == RuleKind::kStop && has(r) && pack.fires(r, state)) {
          sol.stopped = true;
          sol.fired_buggy.push_back(r.id);
          break;
        }
      }
      if (sol.stopped) break;
    }
    if (is_final(state)) break;
    if (static_cast<int>(sol.steps.size()) >= cap) {
      sol.diverged = true;
      break;
    }
    std::optional<Application> app;
    for (const auto& r : pack.buggy_rules()) {
      if (r.kind == RuleKind::kRewrite && has(r) && pack.fires(r, state)) {
        app = pack.apply(r, state);
        sol.fired_buggy.push_back(r.id);
        break;
      }
    }
    if (!app) app = pack.correct_step(state);
    if (!app) {
      sol.diverged = true;
      break;
    }
    state = app->next;
    sol.steps.push_back(std::move(*app));
  }
  sol.final_state = std::move(state);
  return sol;
}

}  // namespace pdgen::arith
