// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/errors.hpp"
#include "cak/prompt.hpp"
#include "cak/schema_json.hpp"

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <string>
#include <thread>

using namespace cak;

namespace {

/// In-process completion endpoint with switchable behaviors, bound to an
/// ephemeral port.
class StubServer {
public:
    StubServer() {
        server_.Post("/v1/complete", [this](const httplib::Request& req,
                                            httplib::Response& res) {
            last_body = req.body;
            if (mode == Mode::Echo) {
                json body = json::parse(req.body, nullptr, false);
                json reply;
                reply["completion"] = body.value("prompt", "");
                res.set_content(reply.dump(), "application/json");
            } else if (mode == Mode::ServerError) {
                res.status = 500;
                res.set_content("boom", "text/plain");
            } else if (mode == Mode::Junk) {
                res.set_content("this is not json", "text/plain");
            } else if (mode == Mode::Slow) {
                std::this_thread::sleep_for(std::chrono::milliseconds(1500));
                res.set_content("{\"completion\":\"late\"}", "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const {
        return "http://127.0.0.1:" + std::to_string(port_) + "/v1/complete";
    }

    enum class Mode { Echo, ServerError, Junk, Slow };
    Mode mode = Mode::Echo;
    std::string last_body;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

RenderedPrompt rendered(const std::string& text) {
    RenderedPrompt prompt;
    prompt.text = text;
    prompt.placeholders_resolved = true;
    return prompt;
}

LLMEndpointConfig config_for(const StubServer& server) {
    LLMEndpointConfig config;
    config.base_url = server.url();
    config.model_id = "stub-model";
    config.timeout_seconds = 1.0;
    return config;
}

} // namespace

TEST_SUITE("llm endpoint") {
    TEST_CASE("completions round-trip through the wire protocol") {
        StubServer server;
        LLMEndpointConfig config = config_for(server);
        config.max_tokens = 99;
        config.temperature = 0.5;

        std::string completion = execute_prompt(config, rendered("write a test"));
        CHECK(completion == "write a test");

        json sent = json::parse(server.last_body);
        CHECK(sent["model"] == "stub-model");
        CHECK(sent["prompt"] == "write a test");
        CHECK(sent["max_tokens"] == 99);
        CHECK(sent["temperature"] == 0.5);
    }

    TEST_CASE("http error statuses carry the status code") {
        StubServer server;
        server.mode = StubServer::Mode::ServerError;
        try {
            execute_prompt(config_for(server), rendered("x"));
            FAIL("expected HttpStatus");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::HttpStatus);
            CHECK(e.detail() == 500);
        }
    }

    TEST_CASE("unparsable bodies are malformed responses") {
        StubServer server;
        server.mode = StubServer::Mode::Junk;
        try {
            execute_prompt(config_for(server), rendered("x"));
            FAIL("expected MalformedResponse");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MalformedResponse);
        }
    }

    TEST_CASE("slow endpoints time out") {
        StubServer server;
        server.mode = StubServer::Mode::Slow;
        auto begin = std::chrono::steady_clock::now();
        try {
            execute_prompt(config_for(server), rendered("x"));
            FAIL("expected Timeout");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Timeout);
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - begin)
                           .count();
        CHECK(elapsed < 1400);  // gave up near the 1s limit, well before the reply
    }

    TEST_CASE("unreachable endpoints are reported as such") {
        LLMEndpointConfig config;
        config.base_url = "http://127.0.0.1:1/v1/complete";
        config.model_id = "stub-model";
        config.timeout_seconds = 1.0;
        try {
            execute_prompt(config, rendered("x"));
            FAIL("expected EndpointUnreachable");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EndpointUnreachable);
        }
    }
}
