// Copyright 2026-present the colchunk project
//
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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.h"
#include "colchunk/index_store.h"
#include "fixtures.h"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome
run(std::vector<std::string> args) {
    args.insert(args.begin(), "colchunk");
    std::ostringstream out;
    std::ostringstream err;
    const int code = colchunk::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Runs the installed binary so the process exit status itself is checked.
int
run_binary(const std::string& args) {
    const std::string cmd = std::string(COLCHUNK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string
slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::vector<std::string> kSmall{"--docs", "12", "--queries", "3", "--rows", "6", "--cols", "6",
                                      "--dim", "16", "--signal-patches", "6", "--query-tokens", "3"};

std::vector<std::string>
with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

}  // namespace

TEST_CASE("generate, compress, query and eval end to end", "[cli]") {
    fixtures::TempDir dir("cli");
    const auto d = dir.path().string();
    REQUIRE(run(with({"generate", "--out-dir", d}, kSmall)).code == 0);

    auto r = run({"compress", d + "/manifest.json", d + "/idx.cchk", "--k", "4", "--threads", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("docs: 12") != std::string::npos);
    CHECK(r.out.find("mean_chunks: 4.00") != std::string::npos);
    CHECK_FALSE(fs::exists(d + "/idx.cchk.tmp"));
    const auto index = colchunk::read_index(fs::path(d + "/idx.cchk"));
    CHECK(index.build_meta.k_target == 4);

    r = run({"query", d + "/idx.cchk", d + "/queries.json", "--top-k", "5", "--out", d + "/run.txt"});
    REQUIRE(r.code == 0);
    std::istringstream lines(slurp(d + "/run.txt"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
    }
    CHECK(count == 15);

    r = run({"eval", d + "/run.txt", d + "/qrels.txt"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("query_id,ndcg_at_5\n", 0) == 0);
    CHECK(r.out.find("\nmean,") != std::string::npos);
}

TEST_CASE("thread count does not change outputs", "[cli]") {
    fixtures::TempDir dir("cli-threads");
    const auto d = dir.path().string();
    REQUIRE(run(with({"generate", "--out-dir", d}, kSmall)).code == 0);
    REQUIRE(run({"compress", d + "/manifest.json", d + "/a.cchk", "--k", "5", "--threads", "1"}).code == 0);
    REQUIRE(run({"compress", d + "/manifest.json", d + "/b.cchk", "--k", "5", "--threads", "3"}).code == 0);
    CHECK(slurp(d + "/a.cchk") == slurp(d + "/b.cchk"));
    const auto q1 = run({"query", d + "/a.cchk", d + "/queries.json", "--threads", "1"});
    const auto q3 = run({"query", d + "/a.cchk", d + "/queries.json", "--threads", "3"});
    CHECK(q1.out == q3.out);
}

TEST_CASE("bench writes one row per configuration plus the baseline", "[cli]") {
    auto r = run(with({"bench", "--sweep-k", "2,4", "--no-timing", "--threads", "1"}, kSmall));
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
    CHECK(r.out.find("\nbase,hac_ward,1,") != std::string::npos);
    CHECK(r.out.find(",0.0\n") != std::string::npos);

    r = run(with({"bench", "--methods", "hac,kmeans", "--k", "4", "--no-timing"}, kSmall));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("kmeans-k4-w0.2") != std::string::npos);
    CHECK(r.err.find("hac_minus_kmeans") != std::string::npos);
}

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"compress", "m.json"}).code == 2);
    CHECK(run({"compress", "m.json", "o.cchk", "--k", "0"}).code == 2);
    CHECK(run({"compress", "m.json", "o.cchk", "--omega", "1.5"}).code == 2);
    CHECK(run({"compress", "m.json", "o.cchk", "--method", "spectral"}).code == 2);
    CHECK(run({"bench", "--manifest", "m.json"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 1 and a typed message", "[cli]") {
    fixtures::TempDir dir("cli-errors");
    const auto d = dir.path().string();
    auto r = run({"compress", d + "/missing.json", d + "/o.cchk"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error [i/o]", 0) == 0);

    std::ofstream(d + "/junk.cchk") << "JUNKJUNKJUNKJUNKJUNKJUNKJUNK";
    std::ofstream(d + "/q.json") << R"({"dim": 4, "queries": []})";
    r = run({"query", d + "/junk.cchk", d + "/q.json"});
    CHECK(r.code == 1);
    CHECK(r.err.find("bad magic") != std::string::npos);

    std::ofstream(d + "/run.txt") << "q1 Q0 d1\n";
    std::ofstream(d + "/qrels.txt") << "q1 0 d1 1\n";
    r = run({"eval", d + "/run.txt", d + "/qrels.txt"});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("the binary reports the same exit codes", "[cli]") {
    CHECK(run_binary("--help") == 0);
    CHECK(run_binary("compress a.json b.cchk --k 0") == 2);
    CHECK(run_binary("compress /nonexistent/m.json /tmp/never.cchk") == 1);
}
