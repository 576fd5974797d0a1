#ifndef SAOCDS_PIPELINE_HPP
#define SAOCDS_PIPELINE_HPP

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "saocds/error.hpp"

namespace saocds {

/// Tracks which pipeline stages are blocked on a queue. When every live
/// stage is blocked at the same time the pipeline can never make progress;
/// the monitor records the queue that closed the cycle and aborts all waits.
class PipelineMonitor {
public:
    explicit PipelineMonitor(std::size_t stages) : blocked_(stages, 0), live_(stages) {}

    PipelineMonitor(const PipelineMonitor&) = delete;
    PipelineMonitor& operator=(const PipelineMonitor&) = delete;

    // Returns false if this wait completed a deadlock.
    bool enter_wait(std::size_t stage, std::size_t producer, std::size_t consumer, const std::string& queue_name) {
        std::lock_guard lk(mu_);
        if (!blocked_[stage]) {
            blocked_[stage] = 1;
            ++n_blocked_;
        }
        if (n_blocked_ >= live_ && live_ > 0) {
            trip(producer, consumer, "pipeline deadlock on queue '" + queue_name + "': every stage is blocked");
            return false;
        }
        return true;
    }

    void leave_wait(std::size_t stage) {
        std::lock_guard lk(mu_);
        clear(stage);
    }

    // Called by the stage that made a blocked counterpart runnable, before it
    // can block itself.
    void wake(std::size_t stage) { leave_wait(stage); }

    void finished(std::size_t stage) {
        std::lock_guard lk(mu_);
        clear(stage);
        if (live_ > 0) --live_;
        if (live_ > 0 && n_blocked_ >= live_) trip(SIZE_MAX, SIZE_MAX, "pipeline deadlock: remaining stages all blocked");
    }

    void abort(const std::string& why) {
        std::lock_guard lk(mu_);
        if (!aborted_) {
            message_ = why;
            aborted_ = true;
        }
    }

    bool aborted() const { return aborted_.load(); }
    bool deadlocked() const { return deadlocked_.load(); }

    [[noreturn]] void raise() const {
        std::lock_guard lk(mu_);
        if (deadlocked_) throw DeadlockError(message_, producer_, consumer_);
        throw StreamError("pipeline aborted: " + message_);
    }

private:
    void clear(std::size_t stage) {
        if (blocked_[stage]) {
            blocked_[stage] = 0;
            --n_blocked_;
        }
    }

    void trip(std::size_t producer, std::size_t consumer, std::string msg) {
        if (aborted_) return;
        producer_ = producer;
        consumer_ = consumer;
        message_ = std::move(msg);
        deadlocked_ = true;
        aborted_ = true;
    }

    mutable std::mutex mu_;
    std::vector<char> blocked_;
    std::size_t n_blocked_ = 0;
    std::size_t live_;
    std::atomic<bool> aborted_{false};
    std::atomic<bool> deadlocked_{false};
    std::size_t producer_ = SIZE_MAX, consumer_ = SIZE_MAX;
    std::string message_;
};

/// Bounded single-producer/single-consumer queue between two stages.
template <class T>
class BoundedQueue {
public:
    BoundedQueue(std::size_t capacity, PipelineMonitor& monitor, std::size_t producer, std::size_t consumer,
                 std::string name)
        : capacity_(capacity), monitor_(monitor), producer_(producer), consumer_(consumer), name_(std::move(name)) {
        if (capacity_ == 0) throw ConfigError("queue '" + name_ + "' needs a positive capacity");
    }

    void push(T item) {
        std::unique_lock lk(mu_);
        while (items_.size() >= capacity_) {
            wait(lk, producer_, [&] { return items_.size() < capacity_; });
        }
        items_.push_back(std::move(item));
        if (consumer_waiting_) monitor_.wake(consumer_);
        cv_.notify_all();
    }

    /// nullopt once the queue is closed and drained.
    std::optional<T> pop() {
        std::unique_lock lk(mu_);
        while (items_.empty() && !closed_) {
            wait(lk, consumer_, [&] { return !items_.empty() || closed_; });
        }
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        if (producer_waiting_) monitor_.wake(producer_);
        cv_.notify_all();
        return item;
    }

    void close() {
        std::lock_guard lk(mu_);
        closed_ = true;
        if (consumer_waiting_) monitor_.wake(consumer_);
        cv_.notify_all();
    }

    void notify() { cv_.notify_all(); }

    std::size_t capacity() const { return capacity_; }
    const std::string& name() const { return name_; }
    std::size_t producer() const { return producer_; }
    std::size_t consumer() const { return consumer_; }

private:
    template <class Pred>
    void wait(std::unique_lock<std::mutex>& lk, std::size_t stage, Pred ready) {
        if (monitor_.aborted()) monitor_.raise();
        bool& flag = stage == producer_ ? producer_waiting_ : consumer_waiting_;
        flag = true;
        if (!monitor_.enter_wait(stage, producer_, consumer_, name_)) {
            flag = false;
            monitor_.raise();
        }
        // Periodic wakeups pick up aborts signalled without this mutex held.
        while (!ready() && !monitor_.aborted()) cv_.wait_for(lk, std::chrono::milliseconds(20));
        flag = false;
        monitor_.leave_wait(stage);
        if (!ready() && monitor_.aborted()) monitor_.raise();
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    std::size_t capacity_;
    PipelineMonitor& monitor_;
    std::size_t producer_, consumer_;
    std::string name_;
    bool closed_ = false;
    bool producer_waiting_ = false;
    bool consumer_waiting_ = false;
};

} // namespace saocds

#endif
