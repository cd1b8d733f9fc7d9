use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one law over a batch of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub law: String,
    pub status: Status,
    pub samples: u64,
    pub counterexample: Option<Value>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts always serialize")
    }
}

/// Accumulates samples for one law, keeping the first counterexample.
#[derive(Debug)]
pub struct Tally {
    law: String,
    samples: u64,
    counterexample: Option<Value>,
}

impl Tally {
    pub fn new(law: impl Into<String>) -> Self {
        Tally { law: law.into(), samples: 0, counterexample: None }
    }

    pub fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.samples += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(counterexample());
        }
    }

    pub fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn finish(self) -> Verdict {
        let status = if self.counterexample.is_some() { Status::Fail } else { Status::Pass };
        Verdict { law: self.law, status, samples: self.samples, counterexample: self.counterexample }
    }
}
