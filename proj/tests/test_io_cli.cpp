#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "hfss/cli.hpp"
#include "hfss/error.hpp"
#include "hfss/field_io.hpp"

using namespace hfss;

namespace {

FieldGrid small_field() {
    FieldGrid f;
    f.grid.shape = {3, 2};
    f.grid.lower = {0.0, 0.5};
    f.grid.upper = {1.0, 1.5};
    f.meta.H = HurstVector({0.4, 0.6});
    f.meta.alpha = 1.5;
    f.meta.seed = 77;
    f.meta.d = 2;
    f.meta.run_id = "abc";
    for (int i = 0; i < 12; ++i) f.values.push_back(0.25 * i - 1.0 / 3.0);
    return f;
}

ErrorKind kind_of(const std::string& bytes) {
    try {
        decode_field(bytes);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("decode succeeded");
    return ErrorKind::invalid_input;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    return status;
}

}  // namespace

TEST_CASE("field file round trip is bit exact") {
    const FieldGrid f = small_field();
    const std::string bytes = encode_field(f);
    CHECK(bytes.substr(0, 8) == "ZHFIELD1");
    const FieldGrid g = decode_field(bytes);
    CHECK(g.grid.shape == f.grid.shape);
    CHECK(g.grid.lower == f.grid.lower);
    CHECK(g.meta.H.values() == f.meta.H.values());
    CHECK(g.meta.seed == 77);
    CHECK(g.meta.run_id == "abc");
    CHECK(g.values == f.values);
    CHECK(encode_field(g) == bytes);
}

TEST_CASE("corrupted field files are rejected") {
    const std::string bytes = encode_field(small_field());
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK(kind_of(bad) == ErrorKind::bad_magic);
    CHECK(kind_of(bytes.substr(0, bytes.size() - 3)) == ErrorKind::truncated_payload);
    CHECK(kind_of(bytes.substr(0, 10)) == ErrorKind::truncated_payload);

    FieldGrid f = small_field();
    f.meta.version = "2.0.0";
    CHECK(kind_of(encode_field(f)) == ErrorKind::version_mismatch);
}

TEST_CASE("atomic write leaves no temporary behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hfss_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "f.zh").string();
    write_field(path, small_field());
    CHECK(read_field(path).values == small_field().values);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    fs::remove_all(dir);
    CHECK_THROWS_AS(write_field((dir / "f.zh").string(), small_field()), Error);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cli exit statuses") {
    std::string text;
    CHECK(run({"formula", "--hurst", "0.4,0.6", "--d", "1", "--dimF", "0"}, &text) == exit_ok);
    CHECK(text.find("\"value\":1.6") != std::string::npos);
    CHECK(run({"formula", "--hurst", "0.4,0.6", "--no-such-flag", "1"}) == exit_validation);
    CHECK(run({"holder", "--in", "/nonexistent/field.zh"}) == exit_validation);
    CHECK(run({"no-such-command"}) == exit_validation);
    CHECK(run({"formula", "--hurst", "1.4,0.6", "--d", "1", "--dimF", "0"}) == exit_validation);
}
