package com.example.calc;

/**
 * Simple calculator used as the running example.
 */
public class Calculator {
    public static final int VERSION = 1;
    private int memory;
    public String name = "calc";

    public Calculator() {
        this.memory = 0;
    }

    public Calculator(int memory) {
        this.memory = memory;
    }

    public int add(int a, int b) {
        return a + b;
    }

    public int sub(int a, int b) {
        return a - b;
    }

    int peek() {
        return memory; // package-private
    }
}
