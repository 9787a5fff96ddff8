#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "mpscap/mpscap.h"

namespace mpscap_cli {

// Failure reported by the library; carries the status for exit-code mapping.
class LibraryError : public std::runtime_error {
 public:
  LibraryError(mpscap_status status, const std::string& msg) : std::runtime_error(msg), status_(status) {}
  mpscap_status status() const noexcept { return status_; }

 private:
  mpscap_status status_;
};

inline void check(mpscap_status st) {
  if (st != MPSCAP_OK) throw LibraryError(st, std::string(mpscap_status_name(st)) + ": " + mpscap_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Free(p); }
};

using Model = std::unique_ptr<mpscap_model, Deleter<mpscap_model, mpscap_model_free>>;
using Distribution = std::unique_ptr<mpscap_distribution, Deleter<mpscap_distribution, mpscap_distribution_free>>;
using Spectrum = std::unique_ptr<mpscap_spectrum, Deleter<mpscap_spectrum, mpscap_spectrum_free>>;
using Channel = std::unique_ptr<mpscap_channel, Deleter<mpscap_channel, mpscap_channel_free>>;
using Density = std::unique_ptr<mpscap_density, Deleter<mpscap_density, mpscap_density_free>>;
using Text = std::unique_ptr<mpscap_text, Deleter<mpscap_text, mpscap_text_free>>;

// Calls a C constructor of the form f(args..., T** out) and wraps the result.
template <class Handle, class Fn, class... Args>
Handle make(Fn fn, Args&&... args) {
  typename Handle::pointer raw = nullptr;
  check(fn(std::forward<Args>(args)..., &raw));
  return Handle(raw);
}

template <class Fn, class... Args>
std::string text_of(Fn fn, Args&&... args) {
  const auto owned = make<Text>(fn, std::forward<Args>(args)...);
  return std::string(mpscap_text_data(owned.get()), mpscap_text_size(owned.get()));
}

}  // namespace mpscap_cli
