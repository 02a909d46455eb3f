#include <doctest.h>

#include <fstream>

#include "den/container.hpp"
#include "den/csv.hpp"
#include "den/errors.hpp"
#include "support/test_helpers.hpp"

using namespace den;

TEST_SUITE_BEGIN("container");

TEST_CASE("round trip is bit identical") {
    test::TempDir tmp;
    Pcg64Stream rng(3);
    Container c;
    c.put_c128("z", test::random_complex(rng, 17, 5));
    c.put_f64("x", Eigen::MatrixXd::Random(4, 9));
    c.put_scalar_i64("count", 42);
    c.put_scalar_f64("k_squared", 0.25);
    c.put_vector_i64("ids", {1, 2, 3});
    write_container(tmp.path("a.dend"), c);

    Container r = read_container(tmp.path("a.dend"));
    write_container(tmp.path("b.dend"), r);
    CHECK(test::read_file_bytes(tmp.path("a.dend")) == test::read_file_bytes(tmp.path("b.dend")));
    CHECK((r.get_c128("z") - c.get_c128("z")).norm() == 0.0);
    CHECK(r.get_scalar_i64("count") == 42);
    CHECK(r.get_scalar_f64("k_squared") == 0.25);
}

TEST_CASE("corrupt container variants") {
    test::TempDir tmp;
    Container c;
    c.put_scalar_f64("v", 1.0);
    write_container(tmp.path("ok.denc"), c);

    SUBCASE("bad magic") {
        std::ofstream os(tmp.path("bad.denc"), std::ios::binary);
        os << "NOPE0000";
        os.close();
        CHECK_THROWS_AS(read_container(tmp.path("bad.denc")), CorruptContainer);
    }
    SUBCASE("truncated payload") {
        std::string bytes = test::read_file_bytes(tmp.path("ok.denc"));
        std::ofstream os(tmp.path("trunc.denc"), std::ios::binary);
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 4));
        os.close();
        CHECK_THROWS_AS(read_container(tmp.path("trunc.denc")), CorruptContainer);
    }
    SUBCASE("duplicate names rejected at insert") {
        Container d;
        d.put_scalar_f64("v", 1.0);
        CHECK_THROWS_AS(d.put_scalar_f64("v", 2.0), CorruptContainer);
    }
    SUBCASE("empty container is a valid 12-byte file") {
        Container empty;
        write_container(tmp.path("empty.denc"), empty);
        CHECK(test::read_file_bytes(tmp.path("empty.denc")).size() == 12);
        Container r = read_container(tmp.path("empty.denc"));
        CHECK(r.entries().empty());
    }
    SUBCASE("trailing bytes are ignored") {
        std::string bytes = test::read_file_bytes(tmp.path("ok.denc"));
        std::ofstream os(tmp.path("trail.denc"), std::ios::binary);
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        os << "future-extension";
        os.close();
        Container r = read_container(tmp.path("trail.denc"));
        CHECK(r.get_scalar_f64("v") == 1.0);
    }
}

TEST_CASE("csv writer quoting and locale-free numbers") {
    test::TempDir tmp;
    CsvWriter w;
    w.comment("seed=1");
    w.header({"name", "value"});
    w.row({"plain", format_number(0.5)});
    w.row({"with,comma", format_number(1e-7)});
    w.save(tmp.path("t.csv"));
    const std::string text = test::read_file_bytes(tmp.path("t.csv"));
    CHECK(text.find("# seed=1\n") != std::string::npos);
    CHECK(text.find("\"with,comma\"") != std::string::npos);
    CHECK(text.find("0.5") != std::string::npos);
    CHECK(text.find(',') != std::string::npos);
}

TEST_SUITE_END();
