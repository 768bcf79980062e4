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

#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "colchunk/ablation.h"
#include "colchunk/chunker.h"
#include "colchunk/dump.h"
#include "colchunk/eval.h"
#include "colchunk/index_store.h"
#include "colchunk/parallel.h"
#include "colchunk/scorer.h"
#include "colchunk/synthetic.h"
#include "colchunk/version.h"

namespace colchunk::cli {

namespace {

namespace fs = std::filesystem;

std::string
fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

std::string
one_line(std::string text) {
    for (char& c : text) {
        if (c == '\n') {
            c = ';';
        }
    }
    return text;
}

struct CompressArgs {
    std::string manifest;
    std::string out_index;
    std::uint32_t k = 40;
    double omega = 0.2;
    std::string method = "hac";
    std::uint64_t seed = 0;
    double posenc_base = 10000.0;
    bool no_normalize = false;
    std::uint32_t kmeans_max_iter = 100;
    double kmeans_tol = 1e-6;
    std::string location;
    unsigned threads = 0;
};

struct QueryArgs {
    std::string index;
    std::string queries;
    std::uint32_t top_k = 10;
    std::string out;
    std::string run_tag = "colchunk";
    unsigned threads = 0;
};

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::uint32_t k = 5;
};

struct GeneratorArgs {
    std::string spec_file;
    std::optional<std::uint32_t> docs, queries, rows, cols, dim, signal_patches, query_tokens, hard_negatives,
        background_regions;
    std::optional<double> sigma, overlap;
    std::optional<std::uint64_t> seed;

    void
    attach(CLI::App* app) {
        app->add_option("--spec", spec_file, "JSON synthetic spec (flags below override it)")
            ->check(CLI::ExistingFile);
        app->add_option("--docs", docs, "Number of documents")->check(CLI::PositiveNumber);
        app->add_option("--queries", queries, "Number of queries")->check(CLI::PositiveNumber);
        app->add_option("--rows", rows, "Patch grid rows")->check(CLI::PositiveNumber);
        app->add_option("--cols", cols, "Patch grid columns")->check(CLI::PositiveNumber);
        app->add_option("--dim", dim, "Embedding dimension (multiple of 4)")->check(CLI::PositiveNumber);
        app->add_option("--signal-patches", signal_patches, "Planted block size")->check(CLI::PositiveNumber);
        app->add_option("--query-tokens", query_tokens, "Tokens per query")->check(CLI::PositiveNumber);
        app->add_option("--hard-negatives", hard_negatives, "Partial-match distractors per query");
        app->add_option("--hard-negative-overlap", overlap, "Fraction of query tokens in each distractor")
            ->check(CLI::Range(0.0, 1.0));
        app->add_option("--background-regions", background_regions, "Structured background tiles per page");
        app->add_option("--sigma", sigma, "Noise level of planted patches")->check(CLI::NonNegativeNumber);
        app->add_option("--seed", seed, "Generator seed");
    }

    SyntheticSpec
    resolve() const {
        SyntheticSpec spec = spec_file.empty() ? SyntheticSpec{} : load_synthetic_spec(spec_file);
        spec.num_docs = docs.value_or(spec.num_docs);
        spec.num_queries = queries.value_or(spec.num_queries);
        spec.grid.rows = rows.value_or(spec.grid.rows);
        spec.grid.cols = cols.value_or(spec.grid.cols);
        spec.dim = dim.value_or(spec.dim);
        spec.signal_patches = signal_patches.value_or(spec.signal_patches);
        spec.query_tokens = query_tokens.value_or(spec.query_tokens);
        spec.hard_negatives = hard_negatives.value_or(spec.hard_negatives);
        spec.hard_negative_overlap = overlap.value_or(spec.hard_negative_overlap);
        spec.background_regions = background_regions.value_or(spec.background_regions);
        spec.noise_sigma = sigma.value_or(spec.noise_sigma);
        spec.seed = seed.value_or(spec.seed);
        check_synthetic_spec(spec);
        return spec;
    }
};

struct BenchArgs {
    GeneratorArgs generator;
    std::string manifest;
    std::string queries_file;
    std::string qrels_file;
    std::vector<std::uint32_t> sweep_k;
    std::vector<double> sweep_omega;
    std::vector<std::string> methods;
    std::uint32_t k = 40;
    double omega = 0.2;
    std::string method = "hac";
    std::uint64_t kmeans_seed = 0;
    double posenc_base = 10000.0;
    bool no_normalize = false;
    bool no_timing = false;
    std::string out;
    unsigned threads = 0;
};

struct GenerateArgs {
    GeneratorArgs generator;
    std::string out_dir;
};

unsigned
resolve_threads(unsigned requested) {
    return requested > 0 ? requested : default_thread_count();
}

int
cmd_compress(const CompressArgs& a, std::ostream& out) {
    ChunkerConfig cfg;
    cfg.k = a.k;
    cfg.omega = a.omega;
    cfg.method = parse_method(a.method);
    cfg.seed = a.seed;
    cfg.kmeans_max_iter = a.kmeans_max_iter;
    cfg.kmeans_tol = a.kmeans_tol;
    cfg.normalize_semantic_before_fusion = !a.no_normalize;
    check_chunker_config(cfg);

    const EmbeddingDumpManifest manifest = load_manifest(a.manifest);
    const PosEncConfig pe{manifest.dim, a.posenc_base};
    check_posenc_config(pe);

    CorpusIndex index;
    index.dim = manifest.dim;
    index.build_meta = {cfg.omega,
                        cfg.k,
                        std::string(method_name(cfg.method)),
                        pe.base,
                        cfg.normalize_semantic_before_fusion,
                        cfg.seed,
                        std::string(kToolVersion),
                        a.location.empty() ? manifest.location : a.location};
    index.docs.resize(manifest.entries.size());
    std::vector<std::vector<PoolWarning>> warnings(manifest.entries.size());
    // Each worker loads and compresses its own entries; only compressed
    // documents are kept in memory.
    parallel_for(manifest.entries.size(), resolve_threads(a.threads), [&](std::size_t i) {
        index.docs[i] = compress(load_entry(manifest, i), cfg, pe, &warnings[i]);
    });
    for (const auto& doc_warnings : warnings) {
        for (const auto& w : doc_warnings) {
            std::cerr << "warning: " << w.message << '\n';
        }
    }

    const fs::path target(a.out_index);
    const fs::path staging = target.string() + ".tmp";
    write_index(index, staging);
    fs::rename(staging, target);

    std::uint64_t patches = 0;
    std::uint64_t chunks = 0;
    for (const auto& doc : index.docs) {
        patches += doc.source_patches();
        chunks += doc.k();
    }
    const double n_docs = static_cast<double>(index.docs.size());
    const std::uint64_t raw_payload = patches * index.dim * 4;
    const std::uint64_t payload = chunks * index.dim * 4;
    out << "docs: " << index.docs.size() << '\n'
        << "mean_patches: " << fmt("%.2f", n_docs > 0 ? patches / n_docs : 0.0) << '\n'
        << "k_target: " << cfg.k << '\n'
        << "mean_chunks: " << fmt("%.2f", n_docs > 0 ? chunks / n_docs : 0.0) << '\n'
        << "index_bytes: " << fs::file_size(target) << '\n'
        << "vector_payload_bytes: " << payload << " (uncompressed " << raw_payload << ")\n"
        << "reduction: " << fmt("%.2f", patches > 0 ? 100.0 * (1.0 - static_cast<double>(chunks) / patches) : 0.0)
        << "%\n";
    return kExitOk;
}

int
cmd_query(const QueryArgs& a, std::ostream& out) {
    const CorpusIndex index = read_index(fs::path(a.index));
    const auto queries = load_queries(a.queries);
    for (const auto& q : queries) {
        if (q.dim != index.dim) {
            throw Error(ErrorCode::kDimensionMismatch,
                        "query " + q.query_id + " has dim " + std::to_string(q.dim) + ", index has dim " +
                            std::to_string(index.dim));
        }
    }

    std::ostringstream run;
    const RetrieveOptions options{a.top_k, resolve_threads(a.threads)};
    for (const auto& q : queries) {
        const auto hits = retrieve(q, index, options);
        write_run(run, q.query_id, hits, a.run_tag);
    }
    if (a.out.empty()) {
        out << run.str();
    } else {
        std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
        if (!file || !(file << run.str())) {
            throw Error(ErrorCode::kIo, "cannot write run file " + a.out);
        }
    }
    return kExitOk;
}

int
cmd_eval(const EvalArgs& a, std::ostream& out) {
    std::ifstream run_in(a.run);
    if (!run_in) {
        throw Error(ErrorCode::kIo, "cannot open run file " + a.run);
    }
    RunRankings run;
    try {
        run = parse_run(run_in);
    } catch (const Error& e) {
        throw Error(e.code(), a.run + ": " + e.what());
    }
    const Qrels qrels = Qrels::load(a.qrels);
    const RunEvaluation eval = evaluate_run(run, qrels, a.k);
    out << "query_id,ndcg_at_" << a.k << '\n';
    for (const auto& q : eval.per_query) {
        out << q.query_id << ',' << fmt("%.6f", q.ndcg) << '\n';
    }
    out << "mean," << fmt("%.6f", eval.mean) << '\n';
    return kExitOk;
}

int
cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    ChunkerConfig base;
    base.k = a.k;
    base.omega = a.omega;
    base.method = parse_method(a.method);
    base.seed = a.kmeans_seed;
    base.normalize_semantic_before_fusion = !a.no_normalize;
    check_chunker_config(base);

    std::vector<AblationConfig> configs;
    if (!a.sweep_k.empty()) {
        auto part = sweep_k(a.sweep_k, base);
        configs.insert(configs.end(), part.begin(), part.end());
    }
    if (!a.sweep_omega.empty()) {
        auto part = sweep_omega(a.sweep_omega, base);
        configs.insert(configs.end(), part.begin(), part.end());
    }
    if (!a.methods.empty()) {
        std::vector<ClusterMethod> methods;
        for (const auto& m : a.methods) {
            methods.push_back(parse_method(m));
        }
        auto part = sweep_methods(methods, base);
        configs.insert(configs.end(), part.begin(), part.end());
    }
    if (configs.empty()) {
        configs.push_back({config_id(base), base});
    }
    for (const auto& c : configs) {
        check_chunker_config(c.chunker);
    }

    std::vector<PatchEmbeddingSet> docs;
    std::vector<QueryEmbeddingSet> queries;
    Qrels qrels;
    std::string location = "synthetic";
    if (!a.manifest.empty()) {
        const auto manifest = load_manifest(a.manifest);
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            docs.push_back(load_entry(manifest, i));
        }
        queries = load_queries(a.queries_file);
        qrels = Qrels::load(a.qrels_file);
        location = manifest.location;
    } else {
        SyntheticCorpus corpus = generate_synthetic(a.generator.resolve());
        docs = std::move(corpus.docs);
        queries = std::move(corpus.queries);
        qrels = std::move(corpus.qrels);
    }

    AblationOptions options;
    options.threads = resolve_threads(a.threads);
    options.posenc_base = a.posenc_base;
    options.record_timing = !a.no_timing;
    options.location = location;
    const auto rows = run_ablation(docs, queries, qrels, configs, options);

    if (a.out.empty()) {
        write_ablation_csv(out, rows);
    } else {
        std::ofstream file(a.out, std::ios::trunc);
        if (!file) {
            throw Error(ErrorCode::kIo, "cannot write " + a.out);
        }
        write_ablation_csv(file, rows);
    }

    // Method comparisons report the HAC minus k-means delta on the error
    // stream so the CSV on stdout stays machine-readable.
    const AblationRow* hac = nullptr;
    const AblationRow* km = nullptr;
    for (const auto& row : rows) {
        if (row.config_id == "base") {
            continue;
        }
        if (row.method == "hac_ward" && row.k == base.k && row.omega == base.omega) {
            hac = &row;
        } else if (row.method == "kmeans" && row.k == base.k && row.omega == base.omega) {
            km = &row;
        }
    }
    if (hac != nullptr && km != nullptr) {
        err << "hac_minus_kmeans_ndcg_at_5: " << fmt("%+.6f", hac->mean_ndcg - km->mean_ndcg) << '\n';
    }
    return kExitOk;
}

int
cmd_generate(const GenerateArgs& a, std::ostream& out) {
    const SyntheticSpec spec = a.generator.resolve();
    const auto corpus = generate_synthetic(spec);
    const auto paths = write_synthetic(corpus, a.out_dir);
    std::ofstream spec_out(fs::path(a.out_dir) / "spec.json", std::ios::trunc);
    spec_out << synthetic_spec_json(spec) << '\n';
    out << "manifest: " << paths.manifest.string() << '\n'
        << "queries: " << paths.queries.string() << '\n'
        << "qrels: " << paths.qrels.string() << '\n';
    return kExitOk;
}

}  // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compress patch-level page embeddings into chunk vectors and search them with MaxSim"};
    app.name(args.empty() ? "colchunk" : fs::path(args.front()).filename().string());
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CompressArgs compress_args;
    auto* compress_cmd = app.add_subcommand("compress", "Compress an embedding dump into a CCHK index");
    compress_cmd->add_option("manifest", compress_args.manifest, "Embedding dump manifest (JSON)")->required();
    compress_cmd->add_option("out_index", compress_args.out_index, "Output index path")->required();
    compress_cmd->add_option("--k", compress_args.k, "Target chunks per page")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compress_cmd->add_option("--omega", compress_args.omega, "Positional prior weight")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    compress_cmd->add_option("--method", compress_args.method, "Clustering method")
        ->check(CLI::IsMember({"hac", "hac_ward", "kmeans"}))
        ->capture_default_str();
    compress_cmd->add_option("--seed", compress_args.seed, "k-means seed")->capture_default_str();
    compress_cmd->add_option("--posenc-base", compress_args.posenc_base, "Positional encoding frequency base")
        ->check(CLI::Range(1.0 + 1e-9, 1e300))
        ->capture_default_str();
    compress_cmd->add_flag("--no-normalize-semantic", compress_args.no_normalize,
                           "Fuse raw semantic vectors instead of unit-normalized ones");
    compress_cmd->add_option("--kmeans-max-iter", compress_args.kmeans_max_iter)->check(CLI::PositiveNumber);
    compress_cmd->add_option("--kmeans-tol", compress_args.kmeans_tol)->check(CLI::PositiveNumber);
    compress_cmd->add_option("--location", compress_args.location, "Embedding location tag (default: manifest's)");
    compress_cmd->add_option("--threads", compress_args.threads, "Worker threads (default: COLCHUNK_THREADS or cores)");

    QueryArgs query_args;
    auto* query_cmd = app.add_subcommand("query", "Retrieve top-k documents for each query");
    query_cmd->add_option("index", query_args.index, "CCHK index")->required();
    query_cmd->add_option("queries", query_args.queries, "Query dump manifest (JSON)")->required();
    query_cmd->add_option("--top-k", query_args.top_k, "Hits per query")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    query_cmd->add_option("--out", query_args.out, "TREC run file (default: stdout)");
    query_cmd->add_option("--run-tag", query_args.run_tag)->capture_default_str();
    query_cmd->add_option("--threads", query_args.threads, "Worker threads (default: COLCHUNK_THREADS or cores)");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "nDCG@k of a TREC run against qrels");
    eval_cmd->add_option("run", eval_args.run, "TREC run file")->required();
    eval_cmd->add_option("qrels", eval_args.qrels, "TREC qrels file")->required();
    eval_cmd->add_option("--k", eval_args.k, "Cutoff")->check(CLI::PositiveNumber)->capture_default_str();

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run chunk-count / omega / method sweeps and emit CSV");
    bench_args.generator.attach(bench_cmd);
    bench_cmd->add_option("--manifest", bench_args.manifest, "Use an existing embedding dump instead of generating");
    bench_cmd->add_option("--queries-file", bench_args.queries_file, "Query dump manifest for --manifest");
    bench_cmd->add_option("--qrels", bench_args.qrels_file, "Qrels for --manifest");
    bench_cmd->add_option("--sweep-k", bench_args.sweep_k, "Chunk counts to sweep")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--sweep-omega", bench_args.sweep_omega, "Omega values to sweep")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--methods", bench_args.methods, "Clustering methods to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"hac", "hac_ward", "kmeans"}));
    bench_cmd->add_option("--k", bench_args.k, "Chunk count for omega/method sweeps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--omega", bench_args.omega, "Omega for k/method sweeps")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench_cmd->add_option("--method", bench_args.method, "Method for k/omega sweeps")
        ->check(CLI::IsMember({"hac", "hac_ward", "kmeans"}))
        ->capture_default_str();
    bench_cmd->add_option("--kmeans-seed", bench_args.kmeans_seed)->capture_default_str();
    bench_cmd->add_option("--posenc-base", bench_args.posenc_base)
        ->check(CLI::Range(1.0 + 1e-9, 1e300))
        ->capture_default_str();
    bench_cmd->add_flag("--no-normalize-semantic", bench_args.no_normalize);
    bench_cmd->add_flag("--no-timing", bench_args.no_timing, "Write wall_ms as 0 for reproducible tables");
    bench_cmd->add_option("--out", bench_args.out, "CSV output path (default: stdout)");
    bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (default: COLCHUNK_THREADS or cores)");

    GenerateArgs generate_args;
    auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic embedding dump, queries and qrels");
    generate_args.generator.attach(generate_cmd);
    generate_cmd->add_option("--out-dir", generate_args.out_dir, "Output directory")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (bench_cmd->parsed() && !bench_args.manifest.empty() &&
        (bench_args.queries_file.empty() || bench_args.qrels_file.empty())) {
        err << "error: --manifest needs --queries-file and --qrels\n";
        return kExitUsage;
    }

    try {
        if (compress_cmd->parsed()) {
            return cmd_compress(compress_args, out);
        }
        if (query_cmd->parsed()) {
            return cmd_query(query_args, out);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_args, out);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench_args, out, err);
        }
        if (generate_cmd->parsed()) {
            return cmd_generate(generate_args, out);
        }
    } catch (const Error& e) {
        err << "error [" << error_code_name(e.code()) << "]: " << one_line(e.what()) << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace colchunk::cli
