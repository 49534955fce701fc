#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace suitesmith {

enum class TestSource { Human, Sbst, Llm };

std::string to_string(TestSource s);
TestSource test_source_from_string(const std::string& s);

/// One benchmark unit: a description, a solution, and the name of the class
/// (or function) under test.
struct Problem {
    std::string id;
    std::string description;
    std::string solution_source;
    std::string class_name;
    std::string header_comment;  // leading comment/docstring block of solution_source
    std::vector<std::string> aux_sources;  // extra files some benchmarks reference

    bool operator==(const Problem&) const = default;
};

struct TestCase {
    std::string id;          // "<problem_id>/<source>/<name>"
    std::string problem_id;
    TestSource source = TestSource::Human;
    std::string name;        // function name inside body
    std::string body;        // exactly one function definition

    bool operator==(const TestCase&) const = default;
};

struct TestFile {
    std::string problem_id;
    std::string preamble;    // imports and shared setup above the first case
    std::vector<TestCase> cases;

    /// Preamble + case bodies joined with blank lines; the runnable file text.
    std::string render() const;

    bool operator==(const TestFile&) const = default;
};

struct Corpus {
    std::map<std::string, Problem> problems;
    std::map<std::pair<std::string, TestSource>, TestFile> tests;
    std::vector<std::string> rejects;  // per-record diagnostics, ingestion continued

    bool operator==(const Corpus& o) const {
        return problems == o.problems && tests == o.tests;
    }
};

enum class CorpusFormat { CanonicalJsonl, HumanevalStyle, ClassevalStyle };
enum class TestDialect { AssertBlock, ClassMethodSuite };

/// Extracts the maximal leading '#'-comment or docstring block; empty if none.
std::string extract_header_comment(const std::string& solution_source);

/// Reads a corpus file in the given format. Records that fail to parse are
/// collected into Corpus::rejects; duplicate ids and unreadable containers
/// throw IngestError.
Corpus load_corpus(const std::string& path, CorpusFormat format);

/// Parses already-canonical test text into preamble + test_* cases without
/// rewriting any bytes of the case bodies.
TestFile split_test_source(const std::string& text);

/// Converts raw test text in the named dialect to the canonical one:
/// standalone test_* functions, plain assert statements, imports hoisted into
/// the preamble. Throws NormalizationError on unparseable input.
TestFile normalize_tests(const std::string& raw, TestDialect dialect);

/// Serializes to the canonical line-delimited format; load_corpus(emit(c))
/// reproduces c.
std::string emit(const Corpus& corpus);
void emit_to_file(const Corpus& corpus, const std::string& path);

}  // namespace suitesmith
