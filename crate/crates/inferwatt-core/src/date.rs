//! Day-precision calendar dates and the fractional-year axis used by the
//! trend fits.
//!
//! Dataset files carry dates as `DD/MM/YYYY`. Regressions need a
//! continuous axis, so dates convert to fractional years as days since
//! 1970-01-01 divided by the mean year length (365.25 days).

use core::fmt;

/// Mean year length in days; divisor for the fractional-year axis.
pub const DAYS_PER_YEAR: f64 = 365.25;

/// A proleptic Gregorian calendar date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CivilDate {
    year: i32,
    month: u8,
    day: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateError {
    /// Input is not a `DD/MM/YYYY` string.
    BadFormat,
    /// Month or day outside the calendar.
    OutOfRange,
}

impl fmt::Display for DateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DateError::BadFormat => write!(f, "expected a DD/MM/YYYY date"),
            DateError::OutOfRange => write!(f, "month or day outside the calendar"),
        }
    }
}

impl core::error::Error for DateError {}

impl CivilDate {
    pub fn new(year: i32, month: u8, day: u8) -> Result<Self, DateError> {
        if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
            return Err(DateError::OutOfRange);
        }
        Ok(CivilDate { year, month, day })
    }

    /// Parses a `DD/MM/YYYY` string.
    pub fn parse_dmy(s: &str) -> Result<Self, DateError> {
        let mut parts = s.split('/');
        let day = parts.next().ok_or(DateError::BadFormat)?;
        let month = parts.next().ok_or(DateError::BadFormat)?;
        let year = parts.next().ok_or(DateError::BadFormat)?;
        if parts.next().is_some() {
            return Err(DateError::BadFormat);
        }
        let day: u8 = day.trim().parse().map_err(|_| DateError::BadFormat)?;
        let month: u8 = month.trim().parse().map_err(|_| DateError::BadFormat)?;
        let year: i32 = year.trim().parse().map_err(|_| DateError::BadFormat)?;
        CivilDate::new(year, month, day)
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u8 {
        self.month
    }

    pub fn day(self) -> u8 {
        self.day
    }

    /// Days since 1970-01-01 (negative before it).
    pub fn days_since_epoch(self) -> i64 {
        days_from_civil(self.year, self.month, self.day)
    }

    pub fn from_days_since_epoch(days: i64) -> Self {
        let (year, month, day) = civil_from_days(days);
        CivilDate { year, month, day }
    }

    /// Continuous time axis: 1970.0 at the epoch, one unit per 365.25 days.
    pub fn fractional_year(self) -> f64 {
        1970.0 + self.days_since_epoch() as f64 / DAYS_PER_YEAR
    }

    /// Nearest calendar day for a fractional year.
    pub fn from_fractional_year(value: f64) -> Self {
        let days = libm::round((value - 1970.0) * DAYS_PER_YEAR) as i64;
        Self::from_days_since_epoch(days)
    }
}

impl fmt::Display for CivilDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}/{:02}/{:04}", self.day, self.month, self.year)
    }
}

fn is_leap(year: i32) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => 0,
    }
}

// Civil-from-days and days-from-civil follow the classic era-based
// Gregorian algorithms (exact for all i32 years).
fn days_from_civil(year: i32, month: u8, day: u8) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let era = y.div_euclid(400);
    let yoe = (y - era * 400) as u32;
    let m = u32::from(month);
    let doy = (153 * (if m > 2 { m - 3 } else { m + 9 }) + 2) / 5 + u32::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + i64::from(doe) - 719_468
}

fn civil_from_days(days: i64) -> (i32, u8, u8) {
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = (z - era * 146_097) as u32;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = i64::from(yoe) + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u8;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u8;
    let year = (y + i64::from(month <= 2)) as i32;
    (year, month, day)
}
