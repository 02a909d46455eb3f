#include "den/container.hpp"

#include <cstring>
#include <fstream>
#include <unordered_set>

#include "den/errors.hpp"

namespace den {

namespace {

constexpr char kMagic[4] = {'D', 'E', 'N', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& v, const char* what) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw CorruptContainer(std::string("container truncated reading ") + what);
}

std::int64_t product(const std::vector<std::int64_t>& shape) {
    std::int64_t p = 1;
    for (auto s : shape) p *= s;
    return p;
}

}  // namespace

std::int64_t ArrayEntry::element_count() const { return product(shape); }

bool Container::has(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return true;
    return false;
}

const ArrayEntry& Container::at(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return e;
    throw CorruptContainer("container entry not found: " + name);
}

void Container::add(ArrayEntry e) {
    if (has(e.name)) throw CorruptContainer("duplicate container entry: " + e.name);
    if (e.element_count() != static_cast<std::int64_t>(std::visit([](const auto& v) { return v.size(); }, e.data)))
        throw ShapeMismatch("container entry payload does not match shape: " + e.name);
    entries_.push_back(std::move(e));
}

void Container::put_entry(ArrayEntry e) { add(std::move(e)); }

void Container::put_f64(const std::string& name, const Eigen::Ref<const Eigen::MatrixXd>& m) {
    std::vector<double> buf(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) buf[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    add({name, {m.rows(), m.cols()}, std::move(buf)});
}

void Container::put_c128(const std::string& name, const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) buf[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    add({name, {m.rows(), m.cols()}, std::move(buf)});
}

void Container::put_i64(const std::string& name,
                        const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m) {
    std::vector<std::int64_t> buf(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) buf[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    add({name, {m.rows(), m.cols()}, std::move(buf)});
}

void Container::put_scalar_f64(const std::string& name, double v) {
    add({name, {}, std::vector<double>{v}});
}

void Container::put_scalar_i64(const std::string& name, std::int64_t v) {
    add({name, {}, std::vector<std::int64_t>{v}});
}

void Container::put_vector_f64(const std::string& name, const std::vector<double>& v) {
    add({name, {static_cast<std::int64_t>(v.size())}, v});
}

void Container::put_vector_i64(const std::string& name, const std::vector<std::int64_t>& v) {
    add({name, {static_cast<std::int64_t>(v.size())}, v});
}

namespace {

template <typename Scalar, typename Mat>
Mat to_matrix(const ArrayEntry& e, const std::vector<Scalar>& v) {
    Eigen::Index rows = 1, cols = 1;
    if (e.shape.size() == 1) {
        rows = e.shape[0];
    } else if (e.shape.size() == 2) {
        rows = e.shape[0];
        cols = e.shape[1];
    } else if (e.shape.size() > 2) {
        // Flatten higher ranks to (shape[0], rest); callers reshape as needed.
        rows = e.shape[0];
        cols = e.element_count() / std::max<std::int64_t>(e.shape[0], 1);
    }
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    return m;
}

}  // namespace

Eigen::MatrixXd Container::get_f64(const std::string& name) const {
    const auto& e = at(name);
    if (e.dtype() != Dtype::f64) throw CorruptContainer("dtype mismatch (want f64): " + name);
    return to_matrix<double, Eigen::MatrixXd>(e, std::get<std::vector<double>>(e.data));
}

Eigen::MatrixXcd Container::get_c128(const std::string& name) const {
    const auto& e = at(name);
    if (e.dtype() != Dtype::c128) throw CorruptContainer("dtype mismatch (want c128): " + name);
    return to_matrix<std::complex<double>, Eigen::MatrixXcd>(e, std::get<std::vector<std::complex<double>>>(e.data));
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> Container::get_i64(const std::string& name) const {
    const auto& e = at(name);
    if (e.dtype() != Dtype::i64) throw CorruptContainer("dtype mismatch (want i64): " + name);
    return to_matrix<std::int64_t, Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>>(
        e, std::get<std::vector<std::int64_t>>(e.data));
}

double Container::get_scalar_f64(const std::string& name) const {
    const auto& e = at(name);
    if (e.dtype() != Dtype::f64 || e.element_count() != 1)
        throw CorruptContainer("not an f64 scalar: " + name);
    return std::get<std::vector<double>>(e.data)[0];
}

std::int64_t Container::get_scalar_i64(const std::string& name) const {
    const auto& e = at(name);
    if (e.dtype() != Dtype::i64 || e.element_count() != 1)
        throw CorruptContainer("not an i64 scalar: " + name);
    return std::get<std::vector<std::int64_t>>(e.data)[0];
}

void write_container(const std::string& path, const Container& c) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    os.write(kMagic, 4);
    write_raw(os, Container::kVersion);
    write_raw(os, static_cast<std::uint32_t>(c.entries().size()));
    for (const auto& e : c.entries()) {
        write_raw(os, static_cast<std::uint32_t>(e.name.size()));
        os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        write_raw(os, static_cast<std::uint8_t>(e.dtype()));
        write_raw(os, static_cast<std::uint8_t>(e.shape.size()));
        for (auto s : e.shape) write_raw(os, s);
        std::visit(
            [&os](const auto& v) {
                os.write(reinterpret_cast<const char*>(v.data()),
                         static_cast<std::streamsize>(v.size() * sizeof(v[0])));
            },
            e.data);
    }
    if (!os) throw ValidationError("write failed: " + path);
}

Container read_container(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open for reading: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw CorruptContainer("bad magic in " + path);
    std::uint32_t version = 0, count = 0;
    read_raw(is, version, "version");
    if (version != Container::kVersion) throw CorruptContainer("unsupported container version");
    read_raw(is, count, "entry count");

    Container c;
    std::unordered_set<std::string> seen;
    for (std::uint32_t k = 0; k < count; ++k) {
        std::uint32_t name_len = 0;
        read_raw(is, name_len, "name length");
        if (name_len > (1u << 20)) throw CorruptContainer("implausible name length");
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        if (!is) throw CorruptContainer("container truncated reading name");
        if (!seen.insert(name).second) throw CorruptContainer("duplicate container entry: " + name);

        std::uint8_t dtype = 0, rank = 0;
        read_raw(is, dtype, "dtype");
        read_raw(is, rank, "rank");
        std::vector<std::int64_t> shape(rank);
        for (auto& s : shape) read_raw(is, s, "shape");
        std::int64_t n = product(shape);
        if (n < 0 || n > (std::int64_t(1) << 33)) throw CorruptContainer("implausible payload size");

        ArrayEntry e;
        e.name = std::move(name);
        e.shape = std::move(shape);
        auto read_payload = [&](auto& vec) {
            vec.resize(static_cast<std::size_t>(n));
            is.read(reinterpret_cast<char*>(vec.data()),
                    static_cast<std::streamsize>(vec.size() * sizeof(vec[0])));
            if (!is) throw CorruptContainer("container truncated reading payload of " + e.name);
        };
        switch (static_cast<Dtype>(dtype)) {
            case Dtype::f64: {
                std::vector<double> v;
                read_payload(v);
                e.data = std::move(v);
                break;
            }
            case Dtype::c128: {
                std::vector<std::complex<double>> v;
                read_payload(v);
                e.data = std::move(v);
                break;
            }
            case Dtype::i64: {
                std::vector<std::int64_t> v;
                read_payload(v);
                e.data = std::move(v);
                break;
            }
            default:
                throw CorruptContainer("unknown dtype code in " + path);
        }
        c.put_entry(std::move(e));
    }
    // Bytes past the declared entry block are ignored (forward compatibility).
    return c;
}

}  // namespace den
