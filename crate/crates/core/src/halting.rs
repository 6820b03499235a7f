//! A step-budgeted Turing machine interpreter and the executable reductions
//! between halting and the infinite coin-stack problem.
//!
//! Machines run on a two-way infinite tape. Input `n` is written in unary:
//! `n` cells holding the symbol `"1"` immediately left of the head, which
//! starts on a blank cell.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::coins::{check_exponent, dyadic, CoinSequence};
use crate::error::{Error, Result};

/// Symbol used for unary input.
pub const UNARY_SYMBOL: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    pub fn as_str(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Right => "R",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(Move::Left),
            "R" => Ok(Move::Right),
            other => Err(Error::MalformedMachine(format!("move must be \"L\" or \"R\", got {other:?}"))),
        }
    }
}

/// One row `(state, symbol) -> (next, write, move)` of a transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub state: String,
    pub symbol: String,
    pub next: String,
    pub write: String,
    pub shift: Move,
}

impl Rule {
    pub fn new(state: &str, symbol: &str, next: &str, write: &str, shift: Move) -> Self {
        Rule {
            state: state.to_string(),
            symbol: symbol.to_string(),
            next: next.to_string(),
            write: write.to_string(),
            shift,
        }
    }
}

/// Plain description of a machine, as read from or written to a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    pub name: Option<String>,
    pub states: Vec<String>,
    pub start: String,
    pub halt: String,
    pub blank: String,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Action {
    next: usize,
    write: usize,
    shift: Move,
}

/// A validated machine with a dense transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    spec: MachineSpec,
    symbols: Vec<String>,
    start: usize,
    halt: usize,
    blank: usize,
    table: Vec<Option<Action>>,
}

fn index_of(list: &[String], item: &str) -> Option<usize> {
    list.iter().position(|s| s == item)
}

impl TuringMachine {
    pub fn new(spec: MachineSpec) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedMachine(msg));
        for (i, s) in spec.states.iter().enumerate() {
            if spec.states[..i].contains(s) {
                return bad(format!("state {s:?} listed twice"));
            }
        }
        let Some(start) = index_of(&spec.states, &spec.start) else {
            return bad(format!("start state {:?} is not declared", spec.start));
        };
        let Some(halt) = index_of(&spec.states, &spec.halt) else {
            return bad(format!("halt state {:?} is not declared", spec.halt));
        };
        if start == halt {
            return bad("start and halt states coincide".to_string());
        }

        let mut symbols = vec![spec.blank.clone()];
        for r in &spec.rules {
            for s in [&r.symbol, &r.write] {
                if index_of(&symbols, s).is_none() {
                    symbols.push(s.clone());
                }
            }
        }

        let width = symbols.len();
        let mut table = vec![None; spec.states.len() * width];
        for r in &spec.rules {
            let Some(from) = index_of(&spec.states, &r.state) else {
                return bad(format!("rule uses undeclared state {:?}", r.state));
            };
            let Some(next) = index_of(&spec.states, &r.next) else {
                return bad(format!("rule targets undeclared state {:?}", r.next));
            };
            if from == halt {
                return bad(format!("halt state {:?} has an outgoing rule", r.state));
            }
            let sym = index_of(&symbols, &r.symbol).expect("collected above");
            let write = index_of(&symbols, &r.write).expect("collected above");
            let slot = &mut table[from * width + sym];
            if slot.is_some() {
                return bad(format!("duplicate rule for ({:?}, {:?})", r.state, r.symbol));
            }
            *slot = Some(Action { next, write, shift: r.shift });
        }

        for (q, state) in spec.states.iter().enumerate() {
            if q == halt {
                continue;
            }
            for (s, sym) in symbols.iter().enumerate() {
                if table[q * width + s].is_none() {
                    return bad(format!("no rule for ({state:?}, {sym:?})"));
                }
            }
        }

        Ok(TuringMachine { spec, symbols, start, halt, blank: 0, table })
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        self.spec.name.as_deref().unwrap_or("")
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    fn action(&self, state: usize, symbol: usize) -> Action {
        self.table[state * self.symbols.len() + symbol].expect("table is total on non-halt states")
    }
}

/// Outcome of a budgeted run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// The machine entered its halt state on this (1-based) step.
    HaltedAt(u64),
    /// Still running after the whole budget was spent.
    StillRunning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunTrace {
    pub status: RunStatus,
    pub budget: u64,
}

impl RunTrace {
    pub fn halt_step(&self) -> Option<u64> {
        match self.status {
            RunStatus::HaltedAt(s) => Some(s),
            RunStatus::StillRunning => None,
        }
    }
}

/// Live configuration of a running machine.
#[derive(Debug, Clone)]
pub struct Execution<'m> {
    machine: &'m TuringMachine,
    tape: VecDeque<usize>,
    head: usize,
    state: usize,
    steps: u64,
}

impl<'m> Execution<'m> {
    pub fn new(machine: &'m TuringMachine, input: u64) -> Result<Self> {
        let mut tape = VecDeque::new();
        if input > 0 {
            let Some(one) = index_of(&machine.symbols, UNARY_SYMBOL) else {
                return Err(Error::MalformedMachine(format!(
                    "nonzero input needs the symbol {UNARY_SYMBOL:?} in the alphabet"
                )));
            };
            let n = usize::try_from(input).map_err(|_| Error::param("input", "too large"))?;
            tape.extend(core::iter::repeat_n(one, n));
        }
        let head = tape.len();
        tape.push_back(machine.blank);
        Ok(Execution { machine, tape, head, state: machine.start, steps: 0 })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_halted(&self) -> bool {
        self.state == self.machine.halt
    }

    /// Applies one transition. Returns `true` once the machine has halted.
    pub fn step(&mut self) -> bool {
        if self.is_halted() {
            return true;
        }
        let act = self.machine.action(self.state, self.tape[self.head]);
        self.tape[self.head] = act.write;
        match act.shift {
            Move::Left => {
                if self.head == 0 {
                    self.tape.push_front(self.machine.blank);
                } else {
                    self.head -= 1;
                }
            }
            Move::Right => {
                self.head += 1;
                if self.head == self.tape.len() {
                    self.tape.push_back(self.machine.blank);
                }
            }
        }
        self.state = act.next;
        self.steps += 1;
        self.is_halted()
    }

    /// Tape contents from the leftmost to the rightmost visited cell.
    pub fn tape(&self) -> Vec<&str> {
        self.tape.iter().map(|&s| self.machine.symbols[s].as_str()).collect()
    }
}

/// Simulates at most `budget` steps.
pub fn tm_run(machine: &TuringMachine, input: u64, budget: u64) -> Result<RunTrace> {
    if budget == 0 {
        return Err(Error::param("budget", "must be at least 1"));
    }
    let mut exec = Execution::new(machine, input)?;
    while exec.steps() < budget {
        if exec.step() {
            return Ok(RunTrace { status: RunStatus::HaltedAt(exec.steps()), budget });
        }
    }
    Ok(RunTrace { status: RunStatus::StillRunning, budget })
}

/// Lazily generated stack weights of the halting reduction: `q_i = 1` while
/// the machine is still running after step `i`, `q_{i0} = 1 + 2^-j` when it
/// halts at step `i0`, and `1` afterwards.
#[derive(Debug, Clone)]
pub struct HaltingCoins<'m> {
    exec: Execution<'m>,
    exponent: u32,
    index: u64,
    halted_at: Option<u64>,
}

impl<'m> HaltingCoins<'m> {
    /// Stack index at which the machine halted, once the generator got there.
    pub fn halted_at(&self) -> Option<u64> {
        self.halted_at
    }

    /// First `len` weights as a [`CoinSequence`].
    pub fn truncate(mut self, len: usize) -> Result<CoinSequence> {
        for _ in 0..len {
            self.next();
        }
        match self.halted_at {
            Some(i) if (i as usize) <= len => CoinSequence::false_at(len, i as usize, self.exponent),
            _ => CoinSequence::all_true(len),
        }
    }
}

impl Iterator for HaltingCoins<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.index += 1;
        if self.halted_at.is_none() && self.exec.step() {
            self.halted_at = Some(self.index);
            return Some(1.0 + dyadic(self.exponent));
        }
        Some(1.0)
    }
}

pub fn encode_halting_as_coins(machine: &TuringMachine, input: u64, exponent: u32) -> Result<HaltingCoins<'_>> {
    check_exponent(exponent, "j")?;
    Ok(HaltingCoins { exec: Execution::new(machine, input)?, exponent, index: 0, halted_at: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOutcome {
    FoundFalseAt(u64),
    NoneWithinBudget,
}

/// Scans for the first `i <= budget` with `q_i != 1`.
pub fn coins_to_halting_search<I>(weights: I, budget: u64) -> Result<SearchOutcome>
where
    I: IntoIterator<Item = f64>,
{
    if budget == 0 {
        return Err(Error::param("budget", "must be at least 1"));
    }
    for (i, q) in (1..=budget).zip(weights) {
        if q != 1.0 {
            return Ok(SearchOutcome::FoundFalseAt(i));
        }
    }
    Ok(SearchOutcome::NoneWithinBudget)
}

fn every_symbol(state: &str, next: &str, shift: Move) -> [Rule; 2] {
    [Rule::new(state, "0", next, "0", shift), Rule::new(state, "1", next, "1", shift)]
}

fn machine(name: &str, states: &[&str], rules: Vec<Rule>) -> TuringMachine {
    let spec = MachineSpec {
        name: Some(name.to_string()),
        states: states.iter().map(|s| s.to_string()).collect(),
        start: states[0].to_string(),
        halt: "H".to_string(),
        blank: "0".to_string(),
        rules,
    };
    TuringMachine::new(spec).expect("bundled machines are well formed")
}

/// Enters the halt state on its first step.
pub fn halt_immediately() -> TuringMachine {
    machine("halt-immediately", &["A", "H"], every_symbol("A", "H", Move::Right).to_vec())
}

/// Moves right forever.
pub fn run_right_forever() -> TuringMachine {
    machine("run-right-forever", &["A", "H"], every_symbol("A", "A", Move::Right).to_vec())
}

/// Writes `k` ones moving right, halting on step `k` for every input.
pub fn count_to(k: usize) -> TuringMachine {
    assert!(k >= 1);
    let names: Vec<String> = (0..k).map(|i| format!("c{i}")).chain(["H".to_string()]).collect();
    let mut rules = Vec::with_capacity(2 * k);
    for i in 0..k {
        for sym in ["0", "1"] {
            rules.push(Rule::new(&names[i], sym, &names[i + 1], "1", Move::Right));
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    machine(&format!("count-{k}"), &refs, rules)
}

/// The two-state busy beaver; halts after 6 steps on a blank tape.
pub fn busy_beaver_2() -> TuringMachine {
    machine(
        "busy-beaver-2",
        &["A", "B", "H"],
        vec![
            Rule::new("A", "0", "B", "1", Move::Right),
            Rule::new("A", "1", "B", "1", Move::Left),
            Rule::new("B", "0", "A", "1", Move::Left),
            Rule::new("B", "1", "H", "1", Move::Right),
        ],
    )
}

/// Erases its unary input right to left; halts on step `n + 2`.
pub fn unary_eraser() -> TuringMachine {
    let mut rules = every_symbol("S", "E", Move::Left).to_vec();
    rules.push(Rule::new("E", "1", "E", "0", Move::Left));
    rules.push(Rule::new("E", "0", "H", "0", Move::Right));
    machine("unary-eraser", &["S", "E", "H"], rules)
}

/// The bundled machine corpus.
pub fn corpus() -> Vec<TuringMachine> {
    vec![
        halt_immediately(),
        run_right_forever(),
        count_to(5),
        count_to(37),
        count_to(200),
        busy_beaver_2(),
        unary_eraser(),
    ]
}

pub fn corpus_machine(name: &str) -> Option<TuringMachine> {
    corpus().into_iter().find(|m| m.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn immediate_halt_and_runaway() {
        for input in [0, 1, 9] {
            let t = tm_run(&halt_immediately(), input, 10).unwrap();
            assert_eq!(t.status, RunStatus::HaltedAt(1));
        }
        let t = tm_run(&run_right_forever(), 0, 1000).unwrap();
        assert_eq!(t.status, RunStatus::StillRunning);
        assert_eq!(t.budget, 1000);
    }

    #[test]
    fn counters_and_beaver() {
        assert_eq!(tm_run(&count_to(37), 3, 100).unwrap().halt_step(), Some(37));
        assert_eq!(tm_run(&count_to(200), 0, 199).unwrap().halt_step(), None);
        assert_eq!(tm_run(&busy_beaver_2(), 0, 100).unwrap().halt_step(), Some(6));
        assert_eq!(tm_run(&unary_eraser(), 4, 100).unwrap().halt_step(), Some(6));
    }

    #[test]
    fn beaver_leaves_four_ones() {
        let bb = busy_beaver_2();
        let mut exec = Execution::new(&bb, 0).unwrap();
        while !exec.step() {}
        assert_eq!(exec.tape().iter().filter(|s| **s == "1").count(), 4);
    }

    #[test]
    fn rejects_malformed_machines() {
        let base = busy_beaver_2().spec().clone();

        let mut missing = base.clone();
        missing.rules.pop();
        assert!(matches!(TuringMachine::new(missing), Err(Error::MalformedMachine(_))));

        let mut from_halt = base.clone();
        from_halt.rules.push(Rule::new("H", "0", "A", "0", Move::Left));
        assert!(TuringMachine::new(from_halt).is_err());

        let mut dup = base.clone();
        dup.rules.push(Rule::new("A", "0", "A", "0", Move::Left));
        assert!(TuringMachine::new(dup).is_err());

        let mut bad_start = base.clone();
        bad_start.start = "Z".into();
        assert!(TuringMachine::new(bad_start).is_err());

        let mut same = base;
        same.start = "H".into();
        assert!(TuringMachine::new(same).is_err());

        assert!(tm_run(&busy_beaver_2(), 0, 0).is_err());
    }

    #[test]
    fn input_needs_unary_symbol() {
        let spec = MachineSpec {
            name: None,
            states: vec!["A".into(), "H".into()],
            start: "A".into(),
            halt: "H".into(),
            blank: "_".into(),
            rules: vec![Rule::new("A", "_", "H", "_", Move::Right)],
        };
        let m = TuringMachine::new(spec).unwrap();
        assert!(tm_run(&m, 0, 5).is_ok());
        assert!(tm_run(&m, 2, 5).is_err());
    }

    #[test]
    fn encoding_examples() {
        let seq = encode_halting_as_coins(&run_right_forever(), 0, 1).unwrap().truncate(64).unwrap();
        assert_eq!(seq, CoinSequence::all_true(64).unwrap());

        let seq = encode_halting_as_coins(&count_to(5), 0, 1).unwrap().truncate(64).unwrap();
        assert_eq!(seq, CoinSequence::false_at(64, 5, 1).unwrap());
        assert_eq!(seq.false_stack().unwrap().gamma(), 0.5);

        let seq = encode_halting_as_coins(&count_to(200), 0, 1).unwrap().truncate(64).unwrap();
        assert!(seq.is_all_true());

        assert!(encode_halting_as_coins(&count_to(5), 0, 0).is_err());
    }

    #[test]
    fn lazy_generator_is_unbounded() {
        let machine = count_to(5);
        let coins = encode_halting_as_coins(&machine, 0, 3).unwrap();
        let w: Vec<f64> = coins.take(10).collect();
        assert_eq!(w[4], 1.125);
        assert!(w.iter().enumerate().all(|(i, &q)| i == 4 || q == 1.0));
    }

    #[test]
    fn search_examples() {
        let seq = CoinSequence::false_at(20, 7, 2).unwrap();
        assert_eq!(coins_to_halting_search(seq.weights(), 10).unwrap(), SearchOutcome::FoundFalseAt(7));
        assert_eq!(coins_to_halting_search(seq.weights(), 6).unwrap(), SearchOutcome::NoneWithinBudget);
        let seq = CoinSequence::all_true(2000).unwrap();
        assert_eq!(coins_to_halting_search(seq.weights(), 1000).unwrap(), SearchOutcome::NoneWithinBudget);
        assert!(coins_to_halting_search(seq.weights(), 0).is_err());
    }
}
