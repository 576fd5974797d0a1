#ifndef SAOCDS_SPIKE_TENSOR_HPP
#define SAOCDS_SPIKE_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace saocds {

using SpikeRow = std::vector<std::uint8_t>;

/// Binary feature map over time, indexed [t][channel][pixel].
class SpikeTensor {
public:
    SpikeTensor() = default;
    SpikeTensor(std::size_t timesteps, std::size_t channels, std::size_t width)
        : t_(timesteps), c_(channels), w_(width), bits_(timesteps * channels * width, 0) {}

    std::size_t timesteps() const { return t_; }
    std::size_t channels() const { return c_; }
    std::size_t width() const { return w_; }
    std::size_t size() const { return bits_.size(); }

    std::uint8_t at(std::size_t t, std::size_t c, std::size_t x) const { return bits_[offset(t, c, x)]; }
    void set(std::size_t t, std::size_t c, std::size_t x, bool v) { bits_[offset(t, c, x)] = v ? 1 : 0; }

    std::span<const std::uint8_t> row(std::size_t t, std::size_t c) const {
        return std::span<const std::uint8_t>(bits_).subspan(offset(t, c, 0), w_);
    }
    void set_row(std::size_t t, std::size_t c, std::span<const std::uint8_t> r);

    std::span<const std::uint8_t> frame(std::size_t t) const {
        return std::span<const std::uint8_t>(bits_).subspan(t * c_ * w_, c_ * w_);
    }
    std::span<const std::uint8_t> bits() const { return bits_; }

    std::size_t popcount() const;

    friend bool operator==(const SpikeTensor&, const SpikeTensor&) = default;

private:
    std::size_t offset(std::size_t t, std::size_t c, std::size_t x) const { return (t * c_ + c) * w_ + x; }

    std::size_t t_ = 0, c_ = 0, w_ = 0;
    std::vector<std::uint8_t> bits_;
};

} // namespace saocds

#endif
