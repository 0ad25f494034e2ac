// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity error: {what} needs {required} qubits but the limit is {limit}{hint}")]
    Capacity {
        what: String,
        required: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error(
        "task budget exceeded for term {term}: {tasks} tasks (N = {branches}, size = {size}, volume = {volume}) over budget {budget}"
    )]
    Budget {
        term: usize,
        tasks: u128,
        branches: u128,
        size: usize,
        volume: usize,
        budget: u64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn capacity(what: impl Into<String>, required: usize, limit: usize) -> Self {
        Error::Capacity {
            what: what.into(),
            required,
            limit,
            hint: "; restrict the circuit to the light cone of the observable",
        }
    }

    /// Process exit status used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Budget { .. } => 4,
            Error::Domain(_) | Error::Unsupported(_) | Error::Config(_) | Error::Io(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
