#include "bdicover/sutsim.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bdicover {

namespace {

// Readings checked against safety thresholds are truncated, not rounded,
// so a logged value only reaches a limit when the physical value did.
std::string format_down(double value, int places) {
    double scale = std::pow(10.0, places);
    return format_fixed(std::floor(value * scale) / scale, places);
}

}  // namespace

void SimEventLog::record(double time, std::string channel, std::string payload) {
    entries.push_back({time, std::move(channel), std::move(payload)});
}

std::string SimEventLog::to_text() const {
    std::ostringstream out;
    for (const SimLogEntry& e : entries)
        out << format_fixed(e.time, 4) << ' ' << e.channel << ' ' << e.payload
            << '\n';
    return out.str();
}

SimEventLog SimEventLog::from_text(const std::string& text) {
    SimEventLog log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string time_text;
        SimLogEntry e;
        if (!(fields >> time_text >> e.channel))
            throw std::invalid_argument("unrecognized log line: " + line);
        e.time = std::stod(time_text);
        std::string rest;
        std::getline(fields, rest);
        e.payload = trim(rest);
        log.entries.push_back(std::move(e));
    }
    return log;
}

FaultConfig FaultConfig::from_text(const std::string& text) {
    FaultConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("fault config line " +
                                        std::to_string(line_no) + ": missing =");
        std::string name = trim(line.substr(0, eq));
        double value = std::stod(trim(line.substr(eq + 1)));
        if (name == "gaze_flip")
            cfg.gaze_flip = value;
        else if (name == "pressure_flip")
            cfg.pressure_flip = value;
        else if (name == "location_flip")
            cfg.location_flip = value;
        else if (name == "release_latency_lo")
            cfg.release_latency_lo = value;
        else if (name == "release_latency_hi")
            cfg.release_latency_hi = value;
        else if (name == "hand_hazard")
            cfg.hand_hazard = value;
        else if (name == "speed_cap")
            cfg.speed_cap = value;
        else
            throw std::invalid_argument("unknown fault setting '" + name + "'");
    }
    return cfg;
}

FaultConfig FaultConfig::load(const std::string& path) {
    return from_text(read_text_file(path));
}

std::string FaultConfig::to_text() const {
    std::ostringstream out;
    out << "gaze_flip=" << format_fixed(gaze_flip, 4) << '\n'
        << "pressure_flip=" << format_fixed(pressure_flip, 4) << '\n'
        << "location_flip=" << format_fixed(location_flip, 4) << '\n'
        << "release_latency_lo=" << format_fixed(release_latency_lo, 4) << '\n'
        << "release_latency_hi=" << format_fixed(release_latency_hi, 4) << '\n'
        << "hand_hazard=" << format_fixed(hand_hazard, 4) << '\n'
        << "speed_cap=" << format_fixed(speed_cap, 4) << '\n';
    return out.str();
}

const std::vector<std::string>& SutCoverage::inventory() {
    static const std::vector<std::string> points = {
        "state:reset",
        "state:waiting",
        "state:grab",
        "state:offer",
        "state:sensing",
        "state:release",
        "state:discard",
        "state:finished",
        "state:timed_out",
        "branch:waiting_voice_leg",
        "branch:waiting_voice_timeout",
        "branch:sensing_voice_ready",
        "branch:sensing_window_timeout",
        "branch:gaze_ok",
        "branch:gaze_away",
        "branch:pressure_ok",
        "branch:pressure_low",
        "branch:location_ok",
        "branch:location_off",
        "branch:release_more_legs",
        "branch:release_all_delivered",
        "branch:discard_back_to_waiting",
        "branch:unexpected_input",
        "action:motion_reset",
        "action:motion_grab",
        "action:hand_close",
        "action:motion_offer",
        "action:offer_signal",
        "action:sensor_read",
        "action:hand_open",
        "action:delivery_confirm",
        "action:leg_release",
        "action:arm_home",
        "action:leg_retract",
        "action:resupply_return",
    };
    return points;
}

SutCoverage SutCoverage::empty() {
    SutCoverage cov;
    for (const std::string& key : inventory()) cov.hits[key] = 0;
    return cov;
}

void SutCoverage::hit(const std::string& key) { hits.at(key) += 1; }

int SutCoverage::covered() const {
    int n = 0;
    for (const auto& [key, count] : hits)
        if (count > 0) ++n;
    return n;
}

int SutCoverage::total() const { return static_cast<int>(hits.size()); }

double SutCoverage::fraction() const {
    return hits.empty() ? 0.0 : static_cast<double>(covered()) / total();
}

std::string SutCoverage::signature() const {
    std::string sig;
    for (const std::string& key : inventory()) {
        auto it = hits.find(key);
        if (it == hits.end() || it->second == 0) continue;
        if (!sig.empty()) sig += ';';
        sig += key;
    }
    return sig;
}

std::string SutCoverage::to_text() const {
    std::ostringstream out;
    for (const std::string& key : inventory()) {
        auto it = hits.find(key);
        out << (it == hits.end() ? 0 : it->second) << ' ' << key << '\n';
    }
    return out.str();
}

SutCoverage SutCoverage::from_text(const std::string& text) {
    SutCoverage cov = empty();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        int count = 0;
        std::string key;
        if (!(fields >> count >> key) || cov.hits.find(key) == cov.hits.end())
            throw std::invalid_argument("unrecognized coverage line: " + line);
        cov.hits[key] = count;
    }
    return cov;
}

namespace {

// Discrete-event core: callbacks ordered by time, insertion order on ties.
struct Scheduler {
    struct Pending {
        double time;
        std::uint64_t ordinal;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Pending& a, const Pending& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.ordinal > b.ordinal;
        }
    };

    std::priority_queue<Pending, std::vector<Pending>, Later> queue;
    std::uint64_t next_ordinal = 0;
    double now = 0.0;

    void after(double delay, std::function<void()> fn) {
        queue.push({now + delay, next_ordinal++, std::move(fn)});
    }

    // Runs until drained or the next event lies past the cap.
    bool run(double cap) {
        while (!queue.empty() && queue.top().time <= cap) {
            Pending ev = queue.top();
            queue.pop();
            now = ev.time;
            ev.fn();
        }
        return queue.empty();
    }
};

// Physical facts the test driver controls and the rig's sensors read.
struct World {
    int gaze = 0;
    int pressure = 0;
    int location = 0;
    double hand_distance = 0.5;  // gripper to human hand, metres
    bool human_present = true;
};

constexpr double kResetSeconds = 20.0;
constexpr double kVoiceWaitSeconds = 60.0;
constexpr double kGrabSeconds = 8.0;
constexpr double kOfferSeconds = 4.0;
constexpr double kSensingWindowSeconds = 15.0;
constexpr double kSensorSettleSeconds = 10.0;
constexpr double kRetractSeconds = 2.0;
constexpr double kPostureResetSeconds = 1.0;
constexpr double kPostureHoldSeconds = 30.0;  // a pose relaxes if not renewed
constexpr double kDefaultHandDistance = 0.5;
constexpr double kReachBandLo = 0.02;
constexpr double kReachBandHi = 0.08;
constexpr int kLegsTarget = 4;

class Controller {
  public:
    Controller(Scheduler& sched, World& world, SimEventLog& log,
               SutCoverage& cov, const FaultConfig& faults, Rng& rng)
        : sched_(sched), world_(world), log_(log), cov_(cov), faults_(faults),
          rng_(rng) {}

    void start() { enter_reset(); }

    // Utterances reach the controller as they are spoken. One leg request can
    // sit buffered while the arm is busy; everything else out of turn is
    // dropped as unexpected.
    void voice(const std::string& utterance) {
        if (utterance == "leg") {
            if (state_ == St::Waiting) {
                accept_leg();
                return;
            }
            if (!leg_buffered_) {
                leg_buffered_ = true;
                return;
            }
            unexpected(utterance);
            return;
        }
        if (utterance == "humanReady") {
            if (state_ == St::Sensing && !ready_heard_) {
                ready_heard_ = true;
                cov_.hit("branch:sensing_voice_ready");
                int e = epoch_;
                sched_.after(kSensorSettleSeconds, [this, e] {
                    if (epoch_ == e) read_sensors();
                });
                return;
            }
            // A readiness claim while the arm is moving a leg means the
            // protocol got out of step; back out conservatively.
            if (state_ == St::Grab || state_ == St::Offer) {
                unexpected(utterance);
                enter_discard();
                return;
            }
            unexpected(utterance);
            return;
        }
        unexpected(utterance);
    }

    std::string state_name() const {
        switch (state_) {
            case St::Reset: return "reset";
            case St::Waiting: return "waiting";
            case St::Grab: return "grab";
            case St::Offer: return "offer";
            case St::Sensing: return "sensing";
            case St::Release: return "release";
            case St::Discard: return "discard";
            case St::Finished: return "finished";
            case St::TimedOut: return "timed_out";
        }
        return "?";
    }

    bool signal_pending = false;
    std::function<void()> signal_waiter;

  private:
    enum class St {
        Reset,
        Waiting,
        Grab,
        Offer,
        Sensing,
        Release,
        Discard,
        Finished,
        TimedOut
    };

    void enter(St state, const char* name) {
        state_ = state;
        ++epoch_;  // invalidates timers armed by the previous state
        log_.record(sched_.now, "state", name);
        cov_.hit(std::string("state:") + name);
    }

    void motion(const char* action_key) {
        cov_.hit(action_key);
        double speed = faults_.speed_cap * rng_.uniform(0.5, 1.0);
        log_.record(sched_.now, "speed", format_down(speed, 4));
    }

    void unexpected(const std::string& utterance) {
        cov_.hit("branch:unexpected_input");
        log_.record(sched_.now, "voice", "unexpected " + utterance);
    }

    int flip(int bit, double rate) {
        if (rate > 0.0 && rng_.chance(rate)) return 1 - bit;
        return bit;
    }

    void enter_reset() {
        enter(St::Reset, "reset");
        motion("action:motion_reset");
        sched_.after(kResetSeconds, [this] { enter_waiting(); });
    }

    void enter_waiting() {
        enter(St::Waiting, "waiting");
        if (leg_buffered_) {
            leg_buffered_ = false;
            accept_leg();
            return;
        }
        int e = epoch_;
        sched_.after(kVoiceWaitSeconds, [this, e] {
            if (epoch_ != e) return;
            cov_.hit("branch:waiting_voice_timeout");
            enter(St::TimedOut, "timed_out");
        });
    }

    void accept_leg() {
        cov_.hit("branch:waiting_voice_leg");
        enter_grab();
    }

    void enter_grab() {
        enter(St::Grab, "grab");
        motion("action:motion_grab");
        // The ready-voice abort can leave Grab early; the guard keeps the
        // stale completion from firing out of Discard.
        int e = epoch_;
        sched_.after(kGrabSeconds, [this, e] {
            if (epoch_ == e) close_hand();
        });
    }

    void close_hand() {
        cov_.hit("action:hand_close");
        log_.record(sched_.now, "hand", "close");
        double distance = world_.hand_distance;
        if (rng_.chance(faults_.hand_hazard))
            distance = rng_.uniform(kReachBandLo, kReachBandHi);
        log_.record(sched_.now, "distance", format_down(distance, 4));
        enter_offer();
    }

    void enter_offer() {
        enter(St::Offer, "offer");
        motion("action:motion_offer");
        int e = epoch_;
        sched_.after(kOfferSeconds, [this, e] {
            if (epoch_ == e) raise_signal();
        });
    }

    void raise_signal() {
        cov_.hit("action:offer_signal");
        log_.record(sched_.now, "signal", "offer");
        signal_pending = true;
        if (signal_waiter) {
            auto waiter = std::move(signal_waiter);
            signal_waiter = nullptr;
            signal_pending = false;
            waiter();
        }
        enter_sensing();
    }

    void enter_sensing() {
        enter(St::Sensing, "sensing");
        ready_heard_ = false;
        int e = epoch_;
        sched_.after(kSensingWindowSeconds, [this, e] {
            if (epoch_ != e || ready_heard_) return;
            cov_.hit("branch:sensing_window_timeout");
            enter_discard();
        });
    }

    void read_sensors() {
        cov_.hit("action:sensor_read");
        int g = flip(world_.gaze, faults_.gaze_flip);
        int p = flip(world_.pressure, faults_.pressure_flip);
        int l = flip(world_.location, faults_.location_flip);
        log_.record(sched_.now, "sensor",
                    std::to_string(g) + " " + std::to_string(p) + " " +
                        std::to_string(l));
        // Guard chain: gaze first, then grip force, then hand position.
        // Each check only runs when the previous one passed, so the hit
        // pattern records how far the posture got.
        if (g != 1) {
            cov_.hit("branch:gaze_away");
            enter_discard();
            return;
        }
        cov_.hit("branch:gaze_ok");
        if (p != 1) {
            cov_.hit("branch:pressure_low");
            enter_discard();
            return;
        }
        cov_.hit("branch:pressure_ok");
        if (l != 1) {
            cov_.hit("branch:location_off");
            enter_discard();
            return;
        }
        cov_.hit("branch:location_ok");
        enter_release();
    }

    void enter_release() {
        enter(St::Release, "release");
        double latency =
            rng_.uniform(faults_.release_latency_lo, faults_.release_latency_hi);
        sched_.after(latency, [this] { do_release(); });
    }

    void do_release() {
        cov_.hit("action:hand_open");
        log_.record(sched_.now, "hand", "open");
        // Grip load drops once the human takes the weight; confirm before
        // counting the leg as delivered.
        cov_.hit("action:delivery_confirm");
        log_.record(sched_.now, "delivery", "confirmed");
        cov_.hit("action:leg_release");
        ++delivered_;
        log_.record(sched_.now, "leg", "release " + std::to_string(delivered_));
        motion("action:arm_home");
        log_.record(sched_.now, "arm", "home");
        // The human takes the leg and straightens up shortly after.
        sched_.after(kPostureResetSeconds, [this] {
            world_.gaze = 0;
            world_.pressure = 0;
            world_.location = 0;
            world_.hand_distance = kDefaultHandDistance;
            log_.record(sched_.now, "posture", "reset");
        });
        if (delivered_ >= kLegsTarget) {
            cov_.hit("branch:release_all_delivered");
            enter(St::Finished, "finished");
        } else {
            cov_.hit("branch:release_more_legs");
            enter_waiting();
        }
    }

    void enter_discard() {
        enter(St::Discard, "discard");
        sched_.after(kRetractSeconds, [this] {
            motion("action:leg_retract");
            log_.record(sched_.now, "leg", "retract");
            motion("action:resupply_return");
            log_.record(sched_.now, "leg", "return");
            cov_.hit("branch:discard_back_to_waiting");
            enter_waiting();
        });
    }

    Scheduler& sched_;
    World& world_;
    SimEventLog& log_;
    SutCoverage& cov_;
    const FaultConfig& faults_;
    Rng& rng_;

    St state_ = St::Reset;
    int epoch_ = 0;
    int delivered_ = 0;
    bool leg_buffered_ = false;
    bool ready_heard_ = false;
};

// Plays stimuli in order on the shared clock. Waits pause the stream until
// the controller signals or the cap runs out.
class Enactor {
  public:
    Enactor(Scheduler& sched, Controller& ctrl, World& world, SimEventLog& log,
            const std::vector<TimedStimulus>& stimuli)
        : sched_(sched), ctrl_(ctrl), world_(world), log_(log),
          stimuli_(stimuli) {}

    void start() {
        sched_.after(0.0, [this] { step(); });
    }

  private:
    void step() {
        if (next_ >= stimuli_.size()) return;
        const TimedStimulus& st = stimuli_[next_++];
        if (st.channel == "voice") {
            // A delay models the speaker's reaction time before the
            // utterance starts.
            double delay = 0.0;
            for (const auto& [name, value] : st.params)
                if (name == "delay") delay = value;
            sched_.after(delay, [this, &st] {
                log_.record(sched_.now, "voice", st.kind);
                ctrl_.voice(st.kind);
                sched_.after(st.duration, [this] { step(); });
            });
        } else if (st.channel == "posture") {
            apply_posture(st);
            sched_.after(st.duration, [this] { step(); });
        } else if (st.channel == "wait") {
            begin_wait(st);
        } else if (st.channel == "location") {
            if (st.kind == "depart") world_.human_present = false;
            log_.record(sched_.now, "location", payload_of(st));
            sched_.after(st.duration, [this] { step(); });
        } else {
            throw std::invalid_argument("unknown stimulus channel '" +
                                        st.channel + "'");
        }
    }

    static std::string payload_of(const TimedStimulus& st) {
        std::ostringstream payload;
        payload << st.kind;
        for (const auto& [name, value] : st.params)
            payload << ' ' << name << '=' << format_fixed(value, 4);
        return payload.str();
    }

    void apply_posture(const TimedStimulus& st) {
        int value = st.value < 0 ? 0 : st.value;
        if (st.kind == "gaze") {
            world_.gaze = value;
            arm_relax(st.kind, gaze_epoch_);
        } else if (st.kind == "pressure") {
            world_.pressure = value;
            arm_relax(st.kind, pressure_epoch_);
        } else if (st.kind == "location") {
            world_.location = value;
            for (const auto& [name, v] : st.params)
                if (name == "distance") world_.hand_distance = v;
            arm_relax(st.kind, location_epoch_);
        } else {
            throw std::invalid_argument("unknown posture '" + st.kind + "'");
        }
        std::ostringstream payload;
        payload << st.kind << '=' << value;
        for (const auto& [name, v] : st.params)
            payload << ' ' << name << '=' << format_fixed(v, 4);
        log_.record(sched_.now, "posture", payload.str());
    }

    // A held pose drifts back to neutral unless the test renews it.
    void arm_relax(const std::string& kind, int& epoch) {
        int e = ++epoch;
        sched_.after(kPostureHoldSeconds, [this, kind, e, &epoch] {
            if (epoch != e) return;
            if (kind == "gaze" && world_.gaze != 0) {
                world_.gaze = 0;
            } else if (kind == "pressure" && world_.pressure != 0) {
                world_.pressure = 0;
            } else if (kind == "location" && world_.location != 0) {
                world_.location = 0;
                world_.hand_distance = kDefaultHandDistance;
            } else {
                return;
            }
            log_.record(sched_.now, "posture", kind + " relax");
        });
    }

    void begin_wait(const TimedStimulus& st) {
        if (st.kind != "signal")
            throw std::invalid_argument("unknown wait kind '" + st.kind + "'");
        if (ctrl_.signal_pending) {
            ctrl_.signal_pending = false;
            sched_.after(0.0, [this] { step(); });
            return;
        }
        int e = ++wait_epoch_;
        ctrl_.signal_waiter = [this, e] {
            if (wait_epoch_ != e) return;
            ++wait_epoch_;
            sched_.after(0.0, [this] { step(); });
        };
        sched_.after(st.duration, [this, e] {
            if (wait_epoch_ != e) return;
            ++wait_epoch_;
            ctrl_.signal_waiter = nullptr;
            step();
        });
    }

    Scheduler& sched_;
    Controller& ctrl_;
    World& world_;
    SimEventLog& log_;
    const std::vector<TimedStimulus>& stimuli_;
    std::size_t next_ = 0;
    int wait_epoch_ = 0;
    int gaze_epoch_ = 0;
    int pressure_epoch_ = 0;
    int location_epoch_ = 0;
};

} // namespace

SimResult run_simulation(const ConcreteTest& test, const FaultConfig& faults,
                         std::uint64_t seed, double time_cap) {
    SimResult result;
    result.coverage = SutCoverage::empty();
    Scheduler sched;
    World world;
    Rng rng(seed);
    Controller ctrl(sched, world, result.log, result.coverage, faults, rng);
    Enactor enactor(sched, ctrl, world, result.log, test.stimuli);
    ctrl.start();
    enactor.start();
    bool drained = sched.run(time_cap);
    result.hit_time_cap = !drained;
    result.final_state = ctrl.state_name();
    return result;
}

} // namespace bdicover
