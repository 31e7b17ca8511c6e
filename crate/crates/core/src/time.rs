//! Monthly timestamps.

use std::fmt;

use crate::error::{Error, Result};

/// A calendar month, the native time step of every series in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthStamp {
    year: i32,
    month: u8,
}

impl MonthStamp {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Validation(format!(
                "month {month} out of range 1..=12"
            )));
        }
        Ok(Self { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    /// Months since 0000-01; consecutive stamps differ by exactly one.
    pub fn index(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn from_index(index: i64) -> Self {
        Self {
            year: index.div_euclid(12) as i32,
            month: (index.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn succ(&self) -> Self {
        Self::from_index(self.index() + 1)
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// All months from `start` through `end`, inclusive.
pub fn month_range(start: MonthStamp, end: MonthStamp) -> Vec<MonthStamp> {
    (start.index()..=end.index())
        .map(MonthStamp::from_index)
        .collect()
}

/// All twelve months of `year`.
pub fn months_of_year(year: i32) -> Vec<MonthStamp> {
    (1..=12)
        .map(|m| MonthStamp::new(year, m).expect("month in range"))
        .collect()
}
