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

#include "pdgen/remote_backend.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <regex>
#include <thread>

#include "httplib.h"
#include "pdgen/evaluation.hpp"

namespace pdgen {
namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

ReasoningStep parse_step(const Json& j) {
  ReasoningStep step;
  step.text = trim(j.at("text").get<std::string>());
  if (j.contains("result")) {
    step.intermediate_result = trim(j["result"].get<std::string>());
  } else {
    step.intermediate_result = trim(j.at("intermediate_result").get<std::string>());
  }
  if (step.text.empty()) throw std::runtime_error("step text is empty");
  return step;
}

bool same_step(const ReasoningStep& a, const ReasoningStep& b) {
  return a.text == b.text && a.intermediate_result == b.intermediate_result;
}

std::string api_key_from_env() {
  const char* key = std::getenv(kApiKeyEnv);
  return key ? key : "";
}

}  // namespace

namespace reply {

std::string strip_fence(const std::string& text) {
  size_t open = text.find("```");
  if (open == std::string::npos) return trim(text);
  size_t body = text.find('\n', open);
  if (body == std::string::npos) return trim(text.substr(open + 3));
  size_t close = text.find("```", body);
  return trim(text.substr(body + 1, close == std::string::npos ? std::string::npos : close - body - 1));
}

Json parse_json(const std::string& text) {
  std::string body = strip_fence(text);
  size_t obj = body.find_first_of("{[");
  if (obj == std::string::npos) throw std::runtime_error("reply contains no JSON");
  char close = body[obj] == '{' ? '}' : ']';
  size_t end = body.find_last_of(close);
  if (end == std::string::npos || end < obj) throw std::runtime_error("reply contains no complete JSON value");
  try {
    return Json::parse(body.substr(obj, end - obj + 1));
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("reply is not valid JSON: ") + e.what());
  }
}

std::vector<Concept> parse_concepts(const std::string& text) {
  std::vector<std::string> raw;
  std::string body = strip_fence(text);
  bool parsed = false;
  if (!body.empty() && body.front() == '[') {
    try {
      for (const auto& item : Json::parse(body)) raw.push_back(item.get<std::string>());
      parsed = true;
    } catch (const std::exception&) {
    }
  }
  if (!parsed) {
    static const std::regex kSplit("[;,\\n]");
    static const std::regex kBullet(R"(^\s*(?:[-*•]|\d+[.)])\s*)");
    for (std::sregex_token_iterator it(body.begin(), body.end(), kSplit, -1), end; it != end; ++it) {
      raw.push_back(std::regex_replace(it->str(), kBullet, ""));
    }
  }
  std::vector<Concept> out;
  for (const auto& r : raw) {
    auto c = Concept::try_make(r);
    if (c && std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  return out;
}

double parse_rating(const std::string& text) {
  static const std::regex kRating(R"((^|[^0-9.])([1-5])(?![0-9.]))");
  std::smatch m;
  if (!std::regex_search(text, m, kRating)) throw std::runtime_error("no 1-5 rating in reply");
  return (std::stoi(m[2]) - 1) / 4.0;
}

}  // namespace reply

HttpChatTransport::HttpChatTransport(const std::string& endpoint, std::string api_key, int timeout_s)
    : api_key_(std::move(api_key)), timeout_s_(timeout_s) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, kUrl)) throw std::invalid_argument("bad endpoint URL: " + endpoint);
  base_ = m[1];
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  static constexpr std::string_view kSuffix = "/chat/completions";
  if (path.size() < kSuffix.size() || path.compare(path.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
    path += kSuffix;
  }
  path_ = path;
}

std::string HttpChatTransport::post(const std::string& body) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_s_, 0);
  client.set_read_timeout(timeout_s_, 0);
  client.set_write_timeout(timeout_s_, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()), true);
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("HTTP " + std::to_string(res->status), true);
  }
  if (res->status != 200) throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body, false);
  return res->body;
}

RemoteBackend::RemoteBackend(const BackendConfig& config, std::shared_ptr<ChatTransport> transport)
    : config_(config), prompts_(PromptSet::builtin()), transport_(std::move(transport)) {
  if (std::string err = config_.check(); !err.empty()) throw std::invalid_argument(err);
  if (config_.kind != "remote") throw std::invalid_argument("RemoteBackend needs backend.kind = remote");
  for (const auto& [op, text] : config_.prompt_templates) prompts_.set(op, text);
  if (!transport_) {
    transport_ = std::make_shared<HttpChatTransport>(config_.endpoint, api_key_from_env(), config_.request_timeout_s);
  }
  cache_ = std::make_unique<ResponseCache>(config_.cache_dir);
}

double RemoteBackend::temperature_for(const std::string& op) {
  if (op == "propose_children" || op == "rollout") return 0.7;
  return 0.0;
}

std::string RemoteBackend::chat(const std::string& op, const std::vector<ChatMessage>& messages) const {
  Json msgs = Json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  std::string base_op = op.substr(0, op.find('.'));
  Json body;
  body["model"] = config_.model_name;
  body["messages"] = msgs;
  body["temperature"] = temperature_for(base_op);
  const std::string key = cache_key(op, config_.model_name, msgs.dump());

  return cache_->get_or_compute(key, [&]() -> std::string {
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry_backoff_ms) * (1 << (attempt - 1)));
      }
      ++requests_;
      try {
        Json reply = Json::parse(transport_->post(body.dump()));
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const TransportError& e) {
        last_error = e.what();
        if (!e.retryable()) break;
      } catch (const std::exception& e) {
        last_error = std::string("unreadable reply: ") + e.what();
      }
      spdlog::warn("{} request failed (attempt {}): {}", op, attempt + 1, last_error);
    }
    throw BackendError(BackendError::Kind::kRemoteUnavailable, op + ": " + last_error);
  });
}

template <typename T, typename Parse>
T RemoteBackend::ask(const std::string& op, const std::map<std::string, std::string>& vars, Parse parse,
                     BackendError::Kind on_failure) const {
  std::vector<ChatMessage> messages{{"system", prompts_.get("system")}, {"user", prompts_.render(op, vars)}};
  std::string first = chat(op, messages);
  std::string error;
  try {
    return parse(first);
  } catch (const BackendError&) {
    throw;
  } catch (const std::exception& e) {
    error = e.what();
  }
  messages.push_back({"assistant", first});
  messages.push_back({"user", prompts_.render("repair", {{"error", error}, {"reply", first}})});
  std::string second = chat(op + ".repair", messages);
  try {
    return parse(second);
  } catch (const BackendError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(on_failure, op + ": " + e.what());
  }
}

std::vector<Concept> RemoteBackend::extract_concepts(const QARecord& record, const CallContext&) const {
  std::vector<ChatMessage> messages{
      {"system", prompts_.get("system")},
      {"user", prompts_.render("extract_concepts", {{"stem", record.stem}, {"correct_answer", record.correct_answer}})}};
  auto concepts = reply::parse_concepts(chat("extract_concepts", messages));
  if (concepts.empty()) {
    throw BackendError(BackendError::Kind::kEmptyExtraction, "no concept for record " + record.record_id);
  }
  return concepts;
}

StepProposal RemoteBackend::propose_children(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                             int branching, const CallContext& ctx) const {
  if (branching < 2) throw std::invalid_argument("branching must be at least 2");
  const size_t need = static_cast<size_t>(branching - 1);
  auto parse = [&](const std::string& text) {
    Json j = reply::parse_json(text);
    if (j.is_object() && j.value("done", false)) {
      throw BackendError(BackendError::Kind::kNoApplicableStep, "model reports a final answer");
    }
    StepProposal p;
    p.correct_step = parse_step(j.at("correct_step"));
    for (const auto& e : j.at("erroneous_steps")) {
      ReasoningStep s = parse_step(e);
      if (same_step(s, p.correct_step)) continue;
      bool dup = std::any_of(p.erroneous_steps.begin(), p.erroneous_steps.end(),
                             [&](const ReasoningStep& o) { return same_step(o, s); });
      if (!dup && p.erroneous_steps.size() < need) p.erroneous_steps.push_back(std::move(s));
    }
    if (p.erroneous_steps.size() != need) {
      throw std::runtime_error("expected " + std::to_string(need) + " distinct erroneous steps, got " +
                               std::to_string(p.erroneous_steps.size()));
    }
    return p;
  };
  return ask<StepProposal>("propose_children",
                           {{"stem", stem},
                            {"trajectory", format_steps(prefix)},
                            {"branching", std::to_string(branching)},
                            {"seed", std::to_string(ctx.seed)}},
                           parse, BackendError::Kind::kMalformedProposal);
}

ReasoningTrajectory RemoteBackend::rollout(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                           int cap, const CallContext& ctx) const {
  if (cap < 1) throw std::invalid_argument("rollout cap must be positive");
  auto parse = [&](const std::string& text) {
    Json j = reply::parse_json(text);
    ReasoningTrajectory t;
    t.steps = prefix;
    for (const auto& s : j.value("steps", Json::array())) t.steps.push_back(parse_step(s));
    t.final_answer = trim(j.at("final_answer").get<std::string>());
    if (t.final_answer.empty()) throw std::runtime_error("final_answer is empty");
    return t;
  };
  ReasoningTrajectory t = ask<ReasoningTrajectory>(
      "rollout",
      {{"stem", stem}, {"trajectory", format_steps(prefix)}, {"cap", std::to_string(cap)}, {"seed", std::to_string(ctx.seed)}},
      parse, BackendError::Kind::kRolloutDivergence);
  if (t.steps.size() - prefix.size() > static_cast<size_t>(cap)) {
    throw BackendError(BackendError::Kind::kRolloutDivergence, "rollout exceeded " + std::to_string(cap) + " steps");
  }
  return t;
}

AnswerText RemoteBackend::conclude(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                                   const CallContext&) const {
  std::vector<ChatMessage> messages{
      {"system", prompts_.get("system")},
      {"user", prompts_.render("conclude", {{"stem", stem}, {"trajectory", format_steps(prefix)}})}};
  std::string answer = reply::strip_fence(chat("conclude", messages));
  static const std::regex kLabel(R"(^(?:final\s+)?answer\s*:\s*)", std::regex::icase);
  answer = trim(std::regex_replace(answer, kLabel, ""));
  if (answer.empty() && !prefix.empty()) return prefix.back().intermediate_result;
  return answer;
}

double RemoteBackend::score_plausibility(const std::string& stem, const ReasoningTrajectory& trajectory,
                                         const AnswerText& correct_answer, const AnswerText& chosen_answer,
                                         const CallContext&) const {
  try {
    return std::clamp(ask<double>("score_plausibility",
                                  {{"stem", stem},
                                   {"trajectory", format_trajectory(trajectory)},
                                   {"correct_answer", correct_answer},
                                   {"chosen_answer", chosen_answer}},
                                  reply::parse_rating, BackendError::Kind::kMalformedReply),
                      0.0, 1.0);
  } catch (const BackendError& e) {
    if (e.kind() != BackendError::Kind::kMalformedReply) throw;
    spdlog::warn("score_plausibility: {}; using 0.5", e.what());
    return 0.5;
  }
}

std::string RemoteBackend::summarize(const Concept& knowledge_concept, const std::vector<ReasoningTrajectory>& trajectories,
                                     const CallContext&) const {
  std::string listing;
  for (size_t i = 0; i < trajectories.size(); ++i) {
    listing += "Trajectory " + std::to_string(i + 1) + ":\n" + format_trajectory(trajectories[i]) + "\n\n";
  }
  auto parse = [](const std::string& text) {
    std::string s = reply::strip_fence(text);
    if (s.empty()) throw std::runtime_error("empty summary");
    return s;
  };
  return ask<std::string>("summarize", {{"concept", knowledge_concept.label()}, {"trajectory", trim(listing)}}, parse,
                          BackendError::Kind::kMalformedReply);
}

DistractorPrediction RemoteBackend::predict_distractor(const std::string& stem, const AnswerText& correct_answer,
                                                       const std::vector<std::string>& misconceptions,
                                                       const CallContext&) const {
  std::string listing;
  for (const auto& m : misconceptions) listing += "- " + m + "\n";
  if (listing.empty()) listing = "(none recorded; use a common mistake for this question)\n";
  auto parse = [](const std::string& text) {
    Json j = reply::parse_json(text);
    DistractorPrediction p;
    for (const auto& s : j.value("steps", Json::array())) p.trajectory.steps.push_back(parse_step(s));
    p.answer = trim(j.at("answer").get<std::string>());
    if (p.answer.empty()) throw std::runtime_error("answer is empty");
    p.trajectory.final_answer = p.answer;
    return p;
  };
  std::vector<ChatMessage> messages{
      {"system", prompts_.get("system")},
      {"user", prompts_.render("predict_distractor",
                               {{"stem", stem}, {"correct_answer", correct_answer}, {"misconceptions", trim(listing)}})}};
  std::string first = chat("predict_distractor", messages);
  std::string error;
  try {
    DistractorPrediction p = parse(first);
    if (!evaluation::answers_equivalent(p.answer, correct_answer)) return p;
    error = "the answer equals the correct answer " + correct_answer + "; give the student's incorrect answer";
  } catch (const std::exception& e) {
    error = e.what();
  }
  messages.push_back({"assistant", first});
  messages.push_back({"user", prompts_.render("repair", {{"error", error}, {"reply", first}})});
  std::string second = chat("predict_distractor.repair", messages);
  DistractorPrediction p;
  try {
    p = parse(second);
  } catch (const std::exception& e) {
    throw BackendError(BackendError::Kind::kDegenerateOutput, std::string("predict_distractor: ") + e.what());
  }
  if (evaluation::answers_equivalent(p.answer, correct_answer)) {
    throw BackendError(BackendError::Kind::kDegenerateOutput, "model produced the correct answer twice");
  }
  return p;
}

}  // namespace pdgen
