this file is hidden and must never be parsed {
