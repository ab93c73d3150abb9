#pragma once

// Core library: rotations, polytope, slicer, key controller, serialization.
// The socket server lives in slice4d/net/ and needs OpenSSL and pthreads.

#include "slice4d/controller.hpp"
#include "slice4d/errors.hpp"
#include "slice4d/frames.hpp"
#include "slice4d/json_io.hpp"
#include "slice4d/obj_writer.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/protocol.hpp"
#include "slice4d/rotation4.hpp"
#include "slice4d/slicer.hpp"
