#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "navigator/engine.hpp"
#include "navigator/protocol.hpp"
#include "support.hpp"

using namespace navigator;

TEST(Protocol, EncodesTheDocumentedShapes) {
    EXPECT_EQ(encode_message(EngineHandshake{"leandojo"}), "{\"ready\":true,\"engine\":\"leandojo\"}\n");
    EngineRequest apply{2, Command::Apply, {}, 0, "rw [h]"};
    EXPECT_EQ(encode_message(apply), "{\"id\":2,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [h]\"}\n");
    EngineResponse pf{3, true, ResultKind::ProofFinished, 0, {}, {}};
    EXPECT_EQ(encode_message(pf), "{\"id\":3,\"ok\":true,\"result\":\"proof_finished\"}\n");
    EngineResponse err{4, false, ResultKind::None, 0, {}, "boom"};
    EXPECT_EQ(encode_message(err), "{\"id\":4,\"ok\":false,\"error\":\"boom\"}\n");
    EngineRequest close{5, Command::Close, {}, 0, {}};
    EXPECT_EQ(encode_message(close), "{\"id\":5,\"cmd\":\"close\"}\n");
}

TEST(Protocol, RoundTripsRandomMessages) {
    std::mt19937 rng(9);
    const std::string texts[] = {"", "a : G\n⊢ a * 1 = a", "rw [← mul_assoc]", "quote \" and \\ backslash", "tab\there"};
    for (int i = 0; i < 500; ++i) {
        EngineMessage m;
        switch (rng() % 5) {
            case 0: m = EngineRequest{static_cast<std::int64_t>(rng() % 1000), Command::Enter, texts[rng() % 5], 0, {}}; break;
            case 1: m = EngineRequest{static_cast<std::int64_t>(rng() % 1000), Command::Apply, {}, static_cast<std::int64_t>(rng() % 50), texts[rng() % 5]}; break;
            case 2: m = EngineResponse{static_cast<std::int64_t>(rng() % 1000), true, ResultKind::State, static_cast<std::int64_t>(rng() % 50), texts[rng() % 5], {}}; break;
            case 3: m = EngineResponse{static_cast<std::int64_t>(rng() % 1000), false, ResultKind::None, 0, {}, texts[rng() % 5]}; break;
            default: m = EngineHandshake{texts[rng() % 5]}; break;
        }
        const std::string line = encode_message(m);
        ASSERT_EQ(line.back(), '\n');
        ASSERT_EQ(line.find('\n'), line.size() - 1);
        ASSERT_EQ(decode_message(line), m) << line;
    }
}

TEST(Protocol, RejectsMalformedLines) {
    EXPECT_THROW(decode_message("not json"), ProtocolError);
    EXPECT_THROW(decode_message("{\"id\":1}"), ProtocolError);
    EXPECT_THROW(decode_message("{\"id\":1,\"cmd\":\"jump\"}"), ProtocolError);
    EXPECT_THROW(decode_message("{\"id\":1,\"ok\":true,\"result\":\"state\"}"), ProtocolError);
    EXPECT_THROW(decode_message("[1,2]"), ProtocolError);
}

TEST(Serve, AnswersEachRequestInOrder) {
    BuiltinEngine engine(testing_support::group());
    std::istringstream in(
        "{\"id\":1,\"cmd\":\"enter\",\"theorem\":\"theorem t (a : G) : a * 1 = a\"}\n"
        "{\"id\":2,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [one_mul]\"}\n"
        "{\"id\":3,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [mul_one]\"}\n"
        "{\"id\":4,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [← mul_left_inv a]\"}\n"
        "{\"id\":5,\"cmd\":\"close\"}\n");
    std::ostringstream out;
    EXPECT_EQ(serve_engine(in, out, engine), 0);
    std::istringstream lines(out.str());
    std::string line;
    std::vector<EngineMessage> got;
    while (std::getline(lines, line)) got.push_back(decode_message(line));
    ASSERT_EQ(got.size(), 6u);
    EXPECT_EQ(std::get<EngineHandshake>(got[0]).engine, "navigator-builtin");
    EXPECT_EQ(std::get<EngineResponse>(got[1]).pretty, "a : G\n⊢ a * 1 = a");
    EXPECT_FALSE(std::get<EngineResponse>(got[2]).ok);
    EXPECT_EQ(std::get<EngineResponse>(got[3]).result, ResultKind::ProofFinished);
    EXPECT_EQ(std::get<EngineResponse>(got[4]).pretty, "a : G\n⊢ a * (a⁻¹ * a) = a");
    EXPECT_TRUE(std::get<EngineResponse>(got[5]).ok);
}

TEST(Serve, UndecodableLineExitsWithTwo) {
    BuiltinEngine engine(testing_support::group());
    std::istringstream in("{oops\n");
    std::ostringstream out;
    EXPECT_EQ(serve_engine(in, out, engine), 2);
}

TEST(Serve, InjectedFailureKeepsTheSessionUsable) {
    BuiltinEngine engine(testing_support::group());
    ServeOptions opts;
    opts.fail_on = "mul_one";
    std::istringstream in(
        "{\"id\":1,\"cmd\":\"enter\",\"theorem\":\"theorem t (a : G) : a * 1 = a\"}\n"
        "{\"id\":2,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [mul_one]\"}\n"
        "{\"id\":3,\"cmd\":\"apply\",\"state_id\":0,\"tactic\":\"rw [mul_comm]\"}\n");
    std::ostringstream out;
    EXPECT_EQ(serve_engine(in, out, engine, opts), 0);
    std::istringstream lines(out.str());
    std::string line;
    std::vector<EngineResponse> responses;
    while (std::getline(lines, line)) {
        const EngineMessage m = decode_message(line);
        if (const auto* r = std::get_if<EngineResponse>(&m)) responses.push_back(*r);
    }
    ASSERT_EQ(responses.size(), 3u);
    EXPECT_EQ(responses[1].error, "injected failure");
    EXPECT_TRUE(responses[2].ok);
}
