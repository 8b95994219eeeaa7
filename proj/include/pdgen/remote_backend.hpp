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

// Backend speaking the chat-completion protocol:
//   POST <endpoint>/chat/completions
//   {"model": ..., "messages": [{"role": ..., "content": ...}], "temperature": ...}
// and reading choices[0].message.content from the reply.

#pragma once

#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgen/backend.hpp"
#include "pdgen/cache.hpp"
#include "pdgen/prompts.hpp"
#include "pdgen/serialization.hpp"

namespace pdgen {

struct ChatMessage {
  std::string role;
  std::string content;
};

class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, bool retryable) : std::runtime_error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Sends one request body and returns the reply text. Throws TransportError.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string post(const std::string& body) = 0;
};

class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(const std::string& endpoint, std::string api_key, int timeout_s);
  std::string post(const std::string& body) override;

 private:
  std::string base_;
  std::string path_;
  std::string api_key_;
  int timeout_s_;
};

class RemoteBackend : public ModelBackend {
 public:
  // Uses HttpChatTransport unless `transport` is given.
  explicit RemoteBackend(const BackendConfig& config, std::shared_ptr<ChatTransport> transport = nullptr);

  std::string_view kind() const override { return "remote"; }

  std::vector<Concept> extract_concepts(const QARecord& record, const CallContext& ctx) const override;
  StepProposal propose_children(const std::string& stem, const std::vector<ReasoningStep>& prefix, int branching,
                                const CallContext& ctx) const override;
  ReasoningTrajectory rollout(const std::string& stem, const std::vector<ReasoningStep>& prefix, int cap,
                              const CallContext& ctx) const override;
  AnswerText conclude(const std::string& stem, const std::vector<ReasoningStep>& prefix,
                      const CallContext& ctx) const override;
  double score_plausibility(const std::string& stem, const ReasoningTrajectory& trajectory,
                            const AnswerText& correct_answer, const AnswerText& chosen_answer,
                            const CallContext& ctx) const override;
  std::string summarize(const Concept& knowledge_concept, const std::vector<ReasoningTrajectory>& trajectories,
                        const CallContext& ctx) const override;
  DistractorPrediction predict_distractor(const std::string& stem, const AnswerText& correct_answer,
                                          const std::vector<std::string>& misconceptions,
                                          const CallContext& ctx) const override;

  // Requests that actually reached the transport (cache misses and retries).
  std::size_t requests_sent() const { return requests_; }
  const ResponseCache& cache() const { return *cache_; }

  static double temperature_for(const std::string& op);

 private:
  // Runs a conversation through the cache and the transport with retries.
  std::string chat(const std::string& op, const std::vector<ChatMessage>& messages) const;
  // One prompt, plus one repair turn if `parse` throws.
  template <typename T, typename Parse>
  T ask(const std::string& op, const std::map<std::string, std::string>& vars, Parse parse,
        BackendError::Kind on_failure) const;

  BackendConfig config_;
  PromptSet prompts_;
  std::shared_ptr<ChatTransport> transport_;
  std::unique_ptr<ResponseCache> cache_;
  mutable std::atomic<std::size_t> requests_{0};
};

// Reply parsing helpers, exposed for tests.
namespace reply {

// Contents of the first ``` fence (language tag dropped), or the trimmed
// text when there is none.
std::string strip_fence(const std::string& text);
// First JSON object or array in the reply. Throws std::runtime_error.
Json parse_json(const std::string& text);
// Normalized, deduplicated concept labels.
std::vector<Concept> parse_concepts(const std::string& text);
// A 1-5 rating mapped to (rating - 1) / 4. Throws std::runtime_error.
double parse_rating(const std::string& text);

}  // namespace reply

}  // namespace pdgen
