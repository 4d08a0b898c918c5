#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <regex>

#include "stylo/error.hpp"
#include "stylo/imitation.hpp"

namespace stylo::imitation {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error(ErrorKind::invalid_config, "bad endpoint url '" + url + "'");
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

class HttpGenerator final : public TextGenerator {
 public:
  explicit HttpGenerator(EndpointConfig config) : config_(std::move(config)), url_(parse_url(config_.url)) {
    if (const char* token = std::getenv(config_.credential_env.c_str()); token && *token) token_ = token;
  }

  std::string complete(const PromptSpec& spec) override {
    httplib::Client client(url_.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    client.set_connection_timeout(secs);
    client.set_read_timeout(secs);
    client.set_write_timeout(secs);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

    const nlohmann::json body = {
        {"system", spec.system_preamble}, {"prompt", spec.user_prompt}, {"max_words", spec.target_words.max}};
    auto res = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorKind::endpoint_failure, "request to " + config_.url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorKind::endpoint_failure, "endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      const auto& text = reply.at("text");
      if (!text.is_string() || text.get<std::string>().empty()) {
        throw Error(ErrorKind::endpoint_failure, "endpoint returned empty text");
      }
      return text.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::endpoint_failure, std::string("endpoint reply is not {\"text\": ...}: ") + e.what());
    }
  }

  std::string model_tag() const override { return config_.model_tag; }

 private:
  EndpointConfig config_;
  ParsedUrl url_;
  std::string token_;
};

}  // namespace

std::unique_ptr<TextGenerator> make_http_generator(const EndpointConfig& config) {
  return std::make_unique<HttpGenerator>(config);
}

}  // namespace stylo::imitation
