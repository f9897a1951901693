// dynseq: benchmark harness and document index front end.
//
// Exit codes: 0 success, 1 runtime failure (I/O, bad index file, unknown
// document, failed verification), 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynseq/bench.hpp"
#include "dynseq/text_index.hpp"

namespace fs = std::filesystem;
using namespace dynseq;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<Code> read_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const std::string bytes{std::istreambuf_iterator<char>(in), {}};
    if (bytes.empty()) throw std::runtime_error(path + ": empty documents cannot be indexed");
    std::vector<Code> codes;
    codes.reserve(bytes.size());
    for (unsigned char ch : bytes) {
        // Code 0 is the terminator.
        if (ch == 0) throw std::runtime_error(path + ": NUL bytes cannot be indexed");
        codes.push_back(ch);
    }
    return codes;
}

TextCollection load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open index " + path);
    try {
        return load_index(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void store(const TextCollection& t, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        save_index(t, out);
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    fs::rename(tmp, path);
}

DocId handle(const TextCollection& t, std::size_t rank) {
    if (rank == 0 || rank > t.document_count())
        throw std::runtime_error("unknown document id " + std::to_string(rank) + " (index has " +
                                 std::to_string(t.document_count()) + ")");
    return t.documents()[rank - 1];
}

void add_files(TextCollection& t, const std::vector<std::string>& files, const char* op) {
    for (const auto& f : files) {
        const auto doc = read_document(f);
        t.insert(doc);
        std::cout << nlohmann::json{{"op", op},
                                    {"id", t.document_count()},
                                    {"file", f},
                                    {"length", doc.size()}}
                         .dump()
                  << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic succinct sequences: benchmarks and a dynamic FM-index"};
    app.require_subcommand(1);

    BenchOptions bopt;
    std::string format = "json";
    auto* bench = app.add_subcommand("bench", "Time operations and emit one JSON record per (op, n)");
    bench->add_option("--structure", bopt.structure, "bitvec | string | cspsi")
        ->check(CLI::IsMember({"bitvec", "string", "cspsi"}));
    bench->add_option("--sizes", bopt.sizes, "Comma-separated sizes")->delimiter(',');
    bench->add_option("--sigma", bopt.sigma, "Alphabet size (string), sequence count d (cspsi)");
    bench->add_option("--seed", bopt.seed, "RNG seed")->capture_default_str();
    bench->add_option("--ops", bopt.ops, "Operations per cell")->capture_default_str();
    bench->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
    bench->add_flag("--verify", bopt.verify, "Replay every operation on the oracle");
    bench->add_flag("--inject-fault", bopt.inject_fault)->group("");

    auto* index = app.add_subcommand("index", "Maintain a document index file");
    index->require_subcommand(1);
    std::string path;
    std::vector<std::string> files;
    bool force = false;
    std::size_t doc_id = 0;
    std::string pattern;
    std::string out_path;

    auto* build = index->add_subcommand("build", "Create an index from files");
    build->add_option("index", path)->required();
    build->add_option("files", files);
    build->add_flag("--force", force, "Overwrite an existing index");
    auto* add = index->add_subcommand("add", "Append files as documents");
    add->add_option("index", path)->required();
    add->add_option("files", files)->required();
    auto* remove = index->add_subcommand("remove", "Delete a document by id");
    remove->add_option("index", path)->required();
    remove->add_option("id", doc_id, "1-based position in the index")->required();
    auto* count = index->add_subcommand("count", "Print the number of occurrences of a pattern");
    count->add_option("index", path)->required();
    count->add_option("pattern", pattern)->required();
    auto* extract = index->add_subcommand("extract", "Write a document's bytes");
    extract->add_option("index", path)->required();
    extract->add_option("id", doc_id)->required();
    extract->add_option("-o,--output", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*bench) {
            try {
                bopt = normalized(bopt);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            bool ok = true;
            run_bench(bopt, [&](const BenchRecord& r) {
                ok &= r.validator == "ok" && r.verify != "fail";
                std::cout << to_json(r) << std::endl;
            });
            if (!ok) {
                std::cerr << "dynseq: verification failed\n";
                return 1;
            }
            return 0;
        }
        if (*build) {
            if (fs::exists(path) && !force)
                throw std::runtime_error(path + " exists; pass --force to overwrite");
            TextCollection t(255);
            add_files(t, files, "build");
            store(t, path);
        } else if (*add) {
            TextCollection t = load(path);
            add_files(t, files, "add");
            store(t, path);
        } else if (*remove) {
            TextCollection t = load(path);
            t.erase(handle(t, doc_id));
            store(t, path);
            std::cout << nlohmann::json{{"op", "remove"}, {"id", doc_id}, {"documents", t.document_count()}}.dump()
                      << '\n';
        } else if (*count) {
            if (pattern.empty()) throw UsageError("pattern must be nonempty");
            const TextCollection t = load(path);
            std::vector<Code> codes;
            for (unsigned char ch : pattern) codes.push_back(ch);
            std::cout << t.count(codes) << '\n';
        } else if (*extract) {
            const TextCollection t = load(path);
            const auto doc = t.extract(handle(t, doc_id));
            const std::string bytes(doc.begin(), doc.end());
            if (out_path.empty()) {
                std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            } else {
                std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
                if (!out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
                    throw std::runtime_error("cannot write " + out_path);
            }
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "dynseq: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dynseq: " << e.what() << '\n';
        return 1;
    }
}
