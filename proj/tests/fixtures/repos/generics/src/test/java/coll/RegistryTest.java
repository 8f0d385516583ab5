package coll;

import org.junit.Before;
import org.junit.Test;

import java.util.List;

import static org.junit.Assert.*;

public class RegistryTest {
    private Registry<String, Integer> registry;

    @Before
    public void setUp() {
        registry = new Registry<>();
    }

    @Test
    public void testRegister() {
        registry.register("a", 1, 2);
        assertEquals(2, registry.size());
    }

    @Test
    public void lookupReturnsMapped() {
        List<String> out = registry.<String>lookupAll("a", v -> String.valueOf(v));
        assertTrue(out.isEmpty());
    }

    @Test
    public void testSizeTest() {
        assertEquals(0, registry.size());
    }
}
