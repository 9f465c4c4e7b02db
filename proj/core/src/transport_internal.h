// Copyright 2026 The ARL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARL_SRC_TRANSPORT_INTERNAL_H_
#define ARL_SRC_TRANSPORT_INTERNAL_H_

#include <string>
#include <string_view>

#include "arl/transport.h"

namespace arl {

// Decode, run the handler, encode the reply. Handler failures become Error
// envelopes; never throws.
std::string ServeFrame(const Handler& handler, std::string_view frame);

}  // namespace arl

#endif  // ARL_SRC_TRANSPORT_INTERNAL_H_
