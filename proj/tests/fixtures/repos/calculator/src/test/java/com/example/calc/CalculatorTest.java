package com.example.calc;

import static org.junit.Assert.assertEquals;

import org.junit.Test;

public class CalculatorTest {
    private final Calculator calc = new Calculator();

    @Test
    public void testAdd() {
        assertEquals(3, calc.add(1, 2));
    }

    @Test
    public void subtractionWorks() {
        assertEquals(1, calc.sub(3, 2));
    }

    @Test
    public void testStuff() {
        assertEquals(2, calc.add(1, 1));
        assertEquals(4, calc.add(2, 2));
    }

    @Test
    public void testMixed() {
        assertEquals(0, calc.sub(calc.add(1, 1), 2));
    }

    @Test
    public void testWeird() {
        assertEquals(1, 1);
    }

    public void helper() {
    }
}
