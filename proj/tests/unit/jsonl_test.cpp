// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/jsonl.hpp"

#include "fixturegen/sandbox.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <thread>
#include <vector>

namespace fixturegen {
    namespace {

        TEST(Jsonl, ReadSkipsBlankLines) {
            ScratchDir dir{};
            auto path = dir.path() / "a.jsonl";
            testing::write_file(path, "{\"a\":1}\n\n   \n{\"a\":2}\n");
            std::vector<std::size_t> lines{};
            read_jsonl(path, [&](std::size_t line, const json& record) {
                lines.push_back(line);
                EXPECT_TRUE(record.contains("a"));
            });
            EXPECT_EQ(lines, (std::vector<std::size_t>{1, 4}));
        }

        TEST(Jsonl, MalformedLineIsNamed) {
            ScratchDir dir{};
            auto path = dir.path() / "a.jsonl";
            testing::write_file(path, "{\"a\":1}\n{\"a\":\n");
            try {
                read_jsonl(path, [](std::size_t, const json&) {});
                FAIL() << "expected JsonlError";
            }
            catch (const JsonlError& e) {
                EXPECT_EQ(e.line(), 2U);
                EXPECT_NE(std::string{e.what()}.find(":2:"), std::string::npos);
            }
        }

        TEST(Jsonl, VisitorErrorCarriesLine) {
            ScratchDir dir{};
            auto path = dir.path() / "a.jsonl";
            testing::write_file(path, "{\"a\":1}\n[1]\n");
            EXPECT_THROW(read_jsonl(path, [](std::size_t, const json&) {}), JsonlError);

            testing::write_file(path, "{\"a\":1}\n{\"b\":1}\n");
            try {
                read_jsonl(path, [](std::size_t, const json& r) { (void)r.at("a"); });
                FAIL() << "expected JsonlError";
            }
            catch (const JsonlError& e) {
                EXPECT_EQ(e.line(), 2U);
            }
        }

        TEST(Jsonl, AppenderIsLineAtomicAcrossThreads) {
            ScratchDir dir{};
            auto path = dir.path() / "out.jsonl";
            {
                JsonlAppender sink{path};
                std::vector<std::jthread> threads{};
                for (int t = 0; t < 4; ++t) {
                    threads.emplace_back([&sink, t] {
                        for (int i = 0; i < 50; ++i) {
                            sink.append(json{{"t", t}, {"i", i}, {"pad", std::string(200, 'x')}});
                        }
                    });
                }
            }
            std::size_t count = 0;
            read_jsonl(path, [&](std::size_t, const json&) { ++count; });
            EXPECT_EQ(count, 200U);
        }

        TEST(Jsonl, AppenderAppendsToExistingFile) {
            ScratchDir dir{};
            auto path = dir.path() / "out.jsonl";
            JsonlAppender{path}.append(json{{"n", 1}});
            JsonlAppender{path}.append(json{{"n", 2}});
            std::vector<int> seen{};
            read_jsonl(path, [&](std::size_t, const json& r) { seen.push_back(r.at("n").get<int>()); });
            EXPECT_EQ(seen, (std::vector<int>{1, 2}));
        }

    }  // namespace
}  // namespace fixturegen
