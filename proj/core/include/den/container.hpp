#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace den {

/// Binary array container ("DEN1"): little-endian, row-major payloads.
/// dtype codes: 1 = f64, 2 = c128 (interleaved re/im), 3 = i64.
enum class Dtype : std::uint8_t { f64 = 1, c128 = 2, i64 = 3 };

struct ArrayEntry {
    std::string name;
    std::vector<std::int64_t> shape;  // empty = scalar
    std::variant<std::vector<double>, std::vector<std::complex<double>>,
                 std::vector<std::int64_t>>
        data;

    Dtype dtype() const { return static_cast<Dtype>(data.index() + 1); }
    std::int64_t element_count() const;
};

/// Ordered collection of named arrays. Insertion order is preserved on disk
/// so write/read/write round-trips are byte-identical.
class Container {
public:
    static constexpr std::uint32_t kVersion = 1;

    bool has(const std::string& name) const;
    const ArrayEntry& at(const std::string& name) const;
    const std::vector<ArrayEntry>& entries() const { return entries_; }

    /// Generic insert preserving an arbitrary-rank shape.
    void put_entry(ArrayEntry e);

    void put_f64(const std::string& name, const Eigen::Ref<const Eigen::MatrixXd>& m);
    void put_c128(const std::string& name, const Eigen::Ref<const Eigen::MatrixXcd>& m);
    void put_i64(const std::string& name, const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m);
    void put_scalar_f64(const std::string& name, double v);
    void put_scalar_i64(const std::string& name, std::int64_t v);
    void put_vector_f64(const std::string& name, const std::vector<double>& v);
    void put_vector_i64(const std::string& name, const std::vector<std::int64_t>& v);

    Eigen::MatrixXd get_f64(const std::string& name) const;
    Eigen::MatrixXcd get_c128(const std::string& name) const;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> get_i64(const std::string& name) const;
    double get_scalar_f64(const std::string& name) const;
    std::int64_t get_scalar_i64(const std::string& name) const;

private:
    void add(ArrayEntry e);
    std::vector<ArrayEntry> entries_;
};

void write_container(const std::string& path, const Container& c);
Container read_container(const std::string& path);

}  // namespace den
