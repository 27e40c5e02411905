#pragma once

namespace gibbs::detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace gibbs::detail
