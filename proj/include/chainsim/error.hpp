/*
 * Copyright 2026 The chainsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace chainsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node id or coordinate outside the mesh.
class InvalidNodeError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument, task, or configuration value.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the requested solver (exact TSP above its threshold).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Cfg packet with missing, duplicated, or inconsistent frames.
class FramingError : public Error {
 public:
  using Error::Error;
};

/// An endpoint received an event that is illegal in its current state.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The event engine exceeded its computed event bound.
class DeadlockError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainsim
