#ifndef SAOCDS_ERROR_HPP
#define SAOCDS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace saocds {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes or dimensions that do not agree with each other.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A compressed kernel or file whose internal structure is inconsistent.
class CorruptionError : public Error {
public:
    using Error::Error;
};

class ScheduleError : public Error {
public:
    using Error::Error;
};

// Input rows missing or arriving out of order on a layer stream.
class StreamError : public Error {
public:
    using Error::Error;
};

class DeadlockError : public Error {
public:
    DeadlockError(const std::string& what, std::size_t producer, std::size_t consumer)
        : Error(what), producer_layer(producer), consumer_layer(consumer) {}

    std::size_t producer_layer;
    std::size_t consumer_layer;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(what), line(line), column(column) {}

    std::size_t line;
    std::size_t column;
};

} // namespace saocds

#endif
